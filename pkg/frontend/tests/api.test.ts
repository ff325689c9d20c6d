import { afterEach, describe, expect, it, vi } from "vitest";
import { getHealth, postQuery } from "../src/api";
import { TEST_CONFIG, jsonResponse, loadGolden, loadGoldenFailure } from "./helpers";

afterEach(() => {
  vi.unstubAllGlobals();
});

describe("postQuery", () => {
  it("returns the body untouched for a successful answer", async () => {
    const doc = loadGolden("correlation");
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(doc)));

    const outcome = await postQuery(TEST_CONFIG, "q");
    expect(outcome.kind).toBe("answer");
    if (outcome.kind === "answer") {
      expect(outcome.body).toEqual(doc);
    }
  });

  it("omits session_id unless one is given", async () => {
    const mock = vi.fn(async (_url: string, _init?: RequestInit) =>
      jsonResponse(loadGolden("rain")));
    vi.stubGlobal("fetch", mock);

    await postQuery(TEST_CONFIG, "q");
    let payload = JSON.parse(String(mock.mock.calls[0][1]?.body));
    expect("session_id" in payload).toBe(false);

    await postQuery(TEST_CONFIG, "q", "abc123");
    payload = JSON.parse(String(mock.mock.calls[1][1]?.body));
    expect(payload.session_id).toBe("abc123");
  });

  it("folds an error body into a one-line message plus diagnostics", async () => {
    const failure = loadGoldenFailure("failure");
    vi.stubGlobal("fetch", vi.fn(async () => jsonResponse(failure, 422)));

    const outcome = await postQuery(TEST_CONFIG, "q");
    expect(outcome.kind).toBe("failure");
    if (outcome.kind === "failure") {
      expect(outcome.status).toBe(422);
      expect(outcome.message).toBe(`${failure.error.code}: ${failure.error.message}`);
      expect(outcome.diagnostics).toEqual(failure.diagnostics);
    }
  });

  it("copes with a non-JSON body", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => new Response("<html>boom</html>", { status: 500 })));

    const outcome = await postQuery(TEST_CONFIG, "q");
    expect(outcome.kind).toBe("failure");
    if (outcome.kind === "failure") {
      expect(outcome.message).toContain("HTTP 500");
    }
  });
});

describe("getHealth", () => {
  it("returns the health document", async () => {
    vi.stubGlobal("fetch", vi.fn(async () =>
      jsonResponse({ status: "ok", net_mode: "offline", backend: "canned" })));
    expect(await getHealth(TEST_CONFIG)).toEqual({
      status: "ok", net_mode: "offline", backend: "canned",
    });
  });

  it("throws on a non-200", async () => {
    vi.stubGlobal("fetch", vi.fn(async () => new Response("", { status: 503 })));
    await expect(getHealth(TEST_CONFIG)).rejects.toThrow("503");
  });
});
