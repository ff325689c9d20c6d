import { readFileSync } from "node:fs";
import { join } from "node:path";
import type { AppConfig } from "../src/config";
import type { QueryResponse, ServiceFailure } from "../src/types";

export function loadGolden(name: string): QueryResponse {
  return JSON.parse(readGoldenText(name));
}

export function loadGoldenFailure(name: string): ServiceFailure {
  return JSON.parse(readGoldenText(name));
}

export function readGoldenText(name: string): string {
  // import.meta.url is rewritten by the test transform, so anchor on cwd.
  return readFileSync(join(process.cwd(), "tests", "golden", `${name}.json`), "utf8");
}

export const TEST_CONFIG: AppConfig = {
  serviceUrl: "",
  // jsdom never fetches subresources, so any template will do.
  tileUrl: "https://tiles.invalid/{z}/{x}/{y}.png",
  tileAttribution: "test tiles",
};

// Leaflet animates through CSS transitions that jsdom does not run.
export const NO_ANIM = {
  zoomAnimation: false,
  fadeAnimation: false,
  markerZoomAnimation: false,
};

/** A sized, attached map container; jsdom elements default to 0x0. */
export function mapContainer(width = 800, height = 600): HTMLElement {
  const el = document.createElement("div");
  Object.defineProperty(el, "clientWidth", { value: width, configurable: true });
  Object.defineProperty(el, "clientHeight", { value: height, configurable: true });
  document.body.appendChild(el);
  return el;
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
