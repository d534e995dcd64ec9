import { describe, expect, it } from "vitest";

import { ApiClient, ApiError, DOCUMENTED_ENDPOINTS, normalizePath } from "../src/api.js";
import { jsonResponse, stubTransport, textResponse } from "./helpers.js";

describe("ApiClient", () => {
  it("sends the bearer token once logged in", async () => {
    let seenAuth: string | undefined;
    const client = new ApiClient("http://x", async (method, url, options) => {
      if (url.endsWith("/auth/login")) {
        return jsonResponse(200, { token: "tok-1", role: "manager", expires_at: "" });
      }
      seenAuth = options.headers["Authorization"];
      return jsonResponse(200, []);
    });
    await client.login("boss", "pw");
    await client.campaigns();
    expect(seenAuth).toBe("Bearer tok-1");
  });

  it("raises ApiError with the machine-readable body", async () => {
    const client = new ApiClient(
      "http://x",
      stubTransport({
        "GET /campaigns": jsonResponse(403, { code: "forbidden", message: "nope" }),
      }),
    );
    client.token = "t";
    await expect(client.campaigns()).rejects.toMatchObject({
      status: 403,
      body: { code: "forbidden", message: "nope" },
    });
    await expect(client.campaigns()).rejects.toBeInstanceOf(ApiError);
  });

  it("treats a 422 submission as an outcome, not an exception", async () => {
    const report = [
      {
        kind: "MissingTier",
        tier: "Noise",
        message: "tier 'Noise' is missing",
        item_index: null,
        time_range: null,
      },
    ];
    const client = new ApiClient(
      "http://x",
      stubTransport({
        "POST /tasks/t1/submission": jsonResponse(422, {
          code: "non_conforming",
          message: "1 conformity error(s)",
          kind: "validation",
          state: "ASSIGNED",
          report,
          advanced: false,
        }),
      }),
    );
    client.token = "t";
    const { status, outcome } = await client.submit("t1", "a.TextGrid", "bytes");
    expect(status).toBe(422);
    expect(outcome.report).toEqual(report);
  });

  it("only ever touches documented endpoints", async () => {
    const ok = jsonResponse(200, []);
    const client = new ApiClient(
      "http://x",
      stubTransport({
        "POST /auth/login": jsonResponse(200, { token: "t", role: "manager", expires_at: "" }),
        "GET /users/me": ok,
        "GET /corpora": ok,
        "POST /corpora/folder-scan": ok,
        "GET /campaigns": ok,
        "POST /campaigns": ok,
        "GET /campaigns/c1/progress": ok,
        "GET /campaigns/c1/tasks": ok,
        "POST /campaigns/c1/tasks": ok,
        "GET /campaigns/c1/gamma.csv": textResponse(200, "a,b\n"),
        "GET /tasks/mine": ok,
        "GET /tasks/t1": ok,
        "GET /tasks/t1/history": ok,
        "POST /tasks/t1/submission": jsonResponse(200, {
          kind: "validation",
          state: "COMPLETED",
          report: [],
          advanced: false,
        }),
      }),
    );
    await client.login("a", "b");
    await client.me();
    await client.corpora();
    await client.scanFolder(".");
    await client.campaigns();
    await client.createCampaign("n", "c1", { name: "", duration_tolerance: 0.1, tiers: [] });
    await client.progress("c1");
    await client.campaignTasks("c1");
    await client.assignTask("c1", {});
    await client.gammaCsv("c1");
    await client.myTasks();
    await client.task("t1");
    await client.history("t1");
    await client.submit("t1", "f", "data");
    expect(client.recorded.length).toBeGreaterThan(0);
    for (const { method, path } of client.recorded) {
      expect(DOCUMENTED_ENDPOINTS).toContain(normalizePath(method, path));
    }
    expect(normalizePath("GET", "/tasks/abc/template")).toBe("GET /tasks/{id}/template");
    expect(normalizePath("GET", "/tasks/mine")).toBe("GET /tasks/mine");
  });
});
