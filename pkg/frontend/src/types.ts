// Wire types for the answer service. Field names and shapes follow the
// service's canonical JSON; nothing here is recomputed client-side.

export interface LegendInfo {
  name: string;
  unit: string;
  min: number | null;
  max: number | null;
  colormap: string;
}

export interface OverlayInfo {
  /** Base64 PNG, alpha encodes missing cells. */
  image: string;
  /** [min_lat, max_lat, min_lon, max_lon] */
  bounds: [number, number, number, number];
  legend: LegendInfo;
}

export interface PointProps {
  name: string;
  value: number;
  unit: string;
}

export interface MapArtifact {
  geojson: { type: "FeatureCollection"; features: any[] };
  /** [lat, lon] — GeoJSON coordinates inside `geojson` are [lon, lat]. */
  center: [number, number];
  zoom: number;
  overlay?: OverlayInfo;
}

export interface ExpertTiming {
  name: string;
  ms: number;
}

export interface QueryMetrics {
  total_ms: number;
  planning_ms: number;
  execution_ms: number;
  experts: ExpertTiming[];
  data_freshness_s: number | null;
  completion: boolean;
}

export interface QueryResponse {
  answer: string;
  elaboration: string;
  plan: string;
  map: MapArtifact;
  metrics: QueryMetrics;
}

export interface ServiceFailure {
  error: { code: string; message: string };
  diagnostics?: string[];
  metrics: QueryMetrics;
}

export interface HealthInfo {
  status: string;
  net_mode: string;
  backend: string;
}

export interface ChatTurn {
  role: "user" | "engine";
  text: string;
  map?: MapArtifact;
  plan?: string;
  /** Diagnostic lines for a failed query; engine turns only. */
  errors?: string[];
}
