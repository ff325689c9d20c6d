export interface AppConfig {
  /** Answer-service base URL without trailing slash; "" means same origin. */
  serviceUrl: string;
  tileUrl: string;
  tileAttribution: string;
}

export const DEFAULTS: AppConfig = {
  serviceUrl: "",
  tileUrl: "https://tile.openstreetmap.org/{z}/{x}/{y}.png",
  tileAttribution: "&copy; OpenStreetMap contributors",
};

/** Merge overrides from a `geodeConfig` global, if the page defines one. */
export function readConfig(): AppConfig {
  const overrides = (globalThis as any).geodeConfig ?? {};
  return { ...DEFAULTS, ...overrides };
}
