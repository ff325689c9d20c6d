import type { AppConfig } from "./config";
import type { HealthInfo, QueryResponse, ServiceFailure } from "./types";

export type QueryOutcome =
  | { kind: "answer"; body: QueryResponse }
  | { kind: "failure"; status: number; message: string; diagnostics: string[] };

/**
 * POST the query and fold the response into an outcome the chat can render.
 * Network-level errors (connection refused, DNS) propagate as exceptions;
 * anything the service answered, including 4xx/5xx, becomes a value.
 */
export async function postQuery(
  cfg: AppConfig,
  query: string,
  sessionId?: string,
): Promise<QueryOutcome> {
  const payload: Record<string, string> = { query };
  if (sessionId) payload.session_id = sessionId;
  const res = await fetch(cfg.serviceUrl + "/api/query", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(payload),
  });

  let body: any = null;
  try {
    body = await res.json();
  } catch {
    return {
      kind: "failure",
      status: res.status,
      message: `service returned HTTP ${res.status} with an unreadable body`,
      diagnostics: [],
    };
  }

  if (res.ok && body && typeof body.answer === "string") {
    return { kind: "answer", body: body as QueryResponse };
  }
  const failure = body as ServiceFailure;
  const message = failure?.error
    ? `${failure.error.code}: ${failure.error.message}`
    : `service returned HTTP ${res.status}`;
  return {
    kind: "failure",
    status: res.status,
    message,
    diagnostics: failure?.diagnostics ?? [],
  };
}

export async function getHealth(cfg: AppConfig): Promise<HealthInfo> {
  const res = await fetch(cfg.serviceUrl + "/api/health");
  if (!res.ok) throw new Error(`health check returned HTTP ${res.status}`);
  return res.json();
}
