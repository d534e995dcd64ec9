import type { HttpResponse, Transport } from "../src/api.js";

export function jsonResponse(status: number, body: unknown): HttpResponse {
  return {
    status,
    json: async () => body,
    text: async () => JSON.stringify(body),
    blob: async () => new Blob([JSON.stringify(body)]),
  };
}

export function textResponse(status: number, text: string): HttpResponse {
  return {
    status,
    json: async () => JSON.parse(text),
    text: async () => text,
    blob: async () => new Blob([text]),
  };
}

/** Transport stub: exact-match routes keyed "METHOD /path". */
export function stubTransport(
  routes: Record<string, HttpResponse | (() => HttpResponse)>,
): Transport {
  return async (method, url, _options) => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    const hit = routes[key];
    if (!hit) {
      return jsonResponse(404, { code: "unknown", message: `no stub for ${key}` });
    }
    return typeof hit === "function" ? hit() : hit;
  };
}
