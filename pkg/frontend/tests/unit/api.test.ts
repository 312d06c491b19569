import { afterEach, describe, expect, it, vi } from "vitest";

import { ApiClient, ApiError } from "../../src/api.js";

function fakeFetch(status: number, body: unknown) {
  return vi.fn(async () => ({
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  })) as unknown as typeof fetch;
}

afterEach(() => vi.unstubAllGlobals());

describe("ApiClient", () => {
  it("returns the parsed payload on success", async () => {
    const fetchSpy = fakeFetch(200, { nodes: [] });
    vi.stubGlobal("fetch", fetchSpy);
    const api = new ApiClient("http://x");
    expect(await api.getCohorts()).toEqual({ nodes: [] });
    expect(fetchSpy).toHaveBeenCalledWith("http://x/api/cohorts",
      expect.objectContaining({ method: "GET" }));
  });

  it("throws ApiError carrying the error body", async () => {
    vi.stubGlobal("fetch", fakeFetch(400, {
      kind: "parse_error", message: "at byte 3", offset: 3,
      expectedTokens: ["=="], found: ">>",
    }));
    const api = new ApiClient("");
    const err = await api.createCohortDsl("age >> 5").catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.status).toBe(400);
    expect(err.body.kind).toBe("parse_error");
    expect(err.body.expectedTokens).toEqual(["=="]);
  });

  it("serializes matrix params into the query string", async () => {
    const fetchSpy = fakeFetch(200, {});
    vi.stubGlobal("fetch", fetchSpy);
    const api = new ApiClient("");
    await api.getMatrix("c1", {
      bpType: "map", cycleHours: 12, direction: "desc",
      cycleLo: 0, cycleHi: 6, legendBounds: "100,200",
    });
    const url = (fetchSpy as ReturnType<typeof vi.fn>).mock.calls[0][0] as string;
    expect(url).toContain("/api/cohorts/c1/matrix?");
    expect(url).toContain("bpType=map");
    expect(url).toContain("cycleHours=12");
    expect(url).toContain("direction=desc");
    expect(url).toContain("cycleLo=0");
    expect(url).toContain("cycleHi=6");
    expect(url).toContain("legendBounds=100%2C200");
    expect(url).not.toContain("sortKey");
  });

  it("posts JSON bodies for cohort creation", async () => {
    const fetchSpy = fakeFetch(200, { cohort: {}, warnings: [] });
    vi.stubGlobal("fetch", fetchSpy);
    const api = new ApiClient("");
    await api.createCohortNl("elderly patients", "c1");
    const [url, init] = (fetchSpy as ReturnType<typeof vi.fn>).mock.calls[0] as [string, RequestInit];
    expect(url).toBe("/api/cohorts/nl");
    expect(JSON.parse(init.body as string)).toEqual({ text: "elderly patients", parentId: "c1" });
  });
});
