import * as L from "leaflet";
import type { AppConfig } from "./config";
import type { LegendInfo, MapArtifact } from "./types";

const GEOMETRY_KINDS = new Set(["Point", "Polygon", "MultiPolygon"]);

const POLYGON_STYLE: L.PolylineOptions = {
  color: "#2b6cb0",
  weight: 2,
  fillColor: "#2b6cb0",
  fillOpacity: 0.12,
};

const markerIcon = L.divIcon({ className: "data-marker", iconSize: [14, 14] });

/** Returns a human-readable problem, or null when the artifact is renderable. */
export function artifactProblem(artifact: any): string | null {
  if (!artifact || typeof artifact !== "object") return "missing map artifact";
  const { center, zoom, geojson, overlay } = artifact;
  if (!Array.isArray(center) || center.length !== 2 || !center.every(Number.isFinite)) {
    return "bad center";
  }
  if (!Number.isFinite(zoom)) return "bad zoom";
  if (!geojson || geojson.type !== "FeatureCollection" || !Array.isArray(geojson.features)) {
    return "bad feature collection";
  }
  for (const feature of geojson.features) {
    const geom = feature?.geometry;
    if (!geom || !GEOMETRY_KINDS.has(geom.type) || !Array.isArray(geom.coordinates)) {
      return `unsupported feature geometry: ${geom?.type ?? "none"}`;
    }
  }
  if (overlay !== undefined && overlay !== null) {
    if (typeof overlay.image !== "string" || overlay.image.length === 0) {
      return "bad overlay image";
    }
    if (!Array.isArray(overlay.bounds) || overlay.bounds.length !== 4
        || !overlay.bounds.every(Number.isFinite)) {
      return "bad overlay bounds";
    }
    if (!overlay.legend || typeof overlay.legend !== "object") return "missing legend";
  }
  return null;
}

function fmt(value: number | null): string {
  if (value === null) return "n/a";
  return Number(value.toPrecision(6)).toString();
}

class LegendControl extends L.Control {
  element: HTMLElement | undefined;

  constructor() {
    super({ position: "bottomright" });
  }

  onAdd(): HTMLElement {
    this.element = L.DomUtil.create("div", "map-legend");
    return this.element;
  }

  update(legend: LegendInfo) {
    if (!this.element) return;
    this.element.replaceChildren();
    const title = document.createElement("strong");
    title.textContent = legend.unit ? `${legend.name} (${legend.unit})` : legend.name;
    const range = document.createElement("div");
    range.className = "map-legend-range";
    range.textContent = `${fmt(legend.min)} to ${fmt(legend.max)}`;
    const ramp = document.createElement("div");
    ramp.className = "map-legend-ramp";
    ramp.textContent = legend.colormap;
    this.element.append(title, range, ramp);
  }
}

function ringToLatLngs(ring: [number, number][]): [number, number][] {
  return ring.map(([lon, lat]) => [lat, lon]);
}

export class MapView {
  readonly map: L.Map;
  private shown: L.Layer[] = [];
  private legend: LegendControl | null = null;
  private placeholder: HTMLElement | null = null;
  private container: HTMLElement;

  constructor(container: HTMLElement, cfg: AppConfig, mapOptions: L.MapOptions = {}) {
    this.container = container;
    this.map = L.map(container, mapOptions);
    L.tileLayer(cfg.tileUrl, { attribution: cfg.tileAttribution, maxZoom: 18 }).addTo(this.map);
    this.map.setView([20, 0], 2);
  }

  /** Render one artifact, replacing whatever the previous query showed. */
  show(artifact: MapArtifact) {
    const problem = artifactProblem(artifact);
    if (problem) {
      this.showProblem(problem);
      return;
    }
    this.clear();
    for (const feature of artifact.geojson.features) {
      for (const layer of this.featureLayers(feature)) {
        layer.addTo(this.map);
        this.shown.push(layer);
      }
    }
    if (artifact.overlay) {
      const [minLat, maxLat, minLon, maxLon] = artifact.overlay.bounds;
      const image = L.imageOverlay(
        "data:image/png;base64," + artifact.overlay.image,
        [[minLat, minLon], [maxLat, maxLon]],
      );
      image.addTo(this.map);
      this.shown.push(image);
      if (!this.legend) {
        this.legend = new LegendControl();
        this.legend.addTo(this.map);
      }
      this.legend.update(artifact.overlay.legend);
    }
    this.map.setView(artifact.center, artifact.zoom, { animate: false });
  }

  /** Swap the map content for a placeholder tile carrying an error note. */
  showProblem(note: string) {
    this.clear();
    this.placeholder = document.createElement("div");
    this.placeholder.className = "map-placeholder";
    this.placeholder.textContent = `map unavailable: ${note}`;
    this.container.appendChild(this.placeholder);
  }

  clear() {
    for (const layer of this.shown) this.map.removeLayer(layer);
    this.shown = [];
    if (this.legend) {
      this.legend.remove();
      this.legend = null;
    }
    if (this.placeholder) {
      this.placeholder.remove();
      this.placeholder = null;
    }
  }

  private featureLayers(feature: any): L.Layer[] {
    const geom = feature.geometry;
    const props = feature.properties ?? {};
    if (geom.type === "Point") {
      const [lon, lat] = geom.coordinates;
      const marker = L.marker([lat, lon], { icon: markerIcon });
      marker.bindTooltip(pointLabel(props));
      return [marker];
    }
    if (geom.type === "Polygon") {
      return [this.polygonLayer(geom.coordinates, props.name)];
    }
    // One layer per part so each boundary ring group stays addressable.
    return geom.coordinates.map((rings: [number, number][][]) =>
      this.polygonLayer(rings, props.name));
  }

  private polygonLayer(rings: [number, number][][], name?: string): L.Polygon {
    const polygon = L.polygon(rings.map(ringToLatLngs), POLYGON_STYLE);
    if (name) polygon.bindTooltip(name);
    return polygon;
  }
}

function pointLabel(props: any): string {
  if (props.value === undefined) return String(props.name ?? "point");
  return `${props.name}: ${props.value} ${props.unit ?? ""}`.trim();
}
