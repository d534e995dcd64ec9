/**
 * REST client. Every call funnels through one `request` function over an
 * injectable transport, and every (method, path) pair is recorded, so the
 * integration tests can assert the client never touches an undocumented
 * endpoint.
 */

import type {
  ApiErrorBody,
  CampaignSummary,
  CorpusSummary,
  HistoryEntry,
  LoginResponse,
  Progress,
  SchemeDoc,
  SubmissionOutcome,
  TaskSummary,
  User,
} from "./types.js";

export interface HttpResponse {
  status: number;
  /** Parsed JSON body, raw text for text endpoints, or binary blob. */
  json(): Promise<unknown>;
  text(): Promise<string>;
  blob(): Promise<Blob>;
}

export type Transport = (
  method: string,
  url: string,
  options: { headers: Record<string, string>; body?: BodyInit },
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(body.message || body.code);
  }
}

export const fetchTransport: Transport = async (method, url, options) => {
  const response = await fetch(url, { method, ...options });
  return {
    status: response.status,
    json: () => response.json(),
    text: () => response.text(),
    blob: () => response.blob(),
  };
};

export class ApiClient {
  token: string | null = null;
  /** Every request made, for traffic-recording tests. */
  readonly recorded: { method: string; path: string }[] = [];

  constructor(
    private baseUrl: string,
    private transport: Transport = fetchTransport,
  ) {}

  private async request(
    method: string,
    path: string,
    body?: unknown,
    upload?: { filename: string; data: Blob | Uint8Array | string },
  ): Promise<HttpResponse> {
    this.recorded.push({ method, path });
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let payload: BodyInit | undefined;
    if (upload) {
      const form = new FormData();
      form.append("file", new Blob([upload.data as BlobPart]), upload.filename);
      payload = form;
    } else if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      payload = JSON.stringify(body);
    }
    const response = await this.transport(method, this.baseUrl + path, {
      headers,
      body: payload,
    });
    if (response.status === 422 && path.endsWith("/submission")) {
      return response; // a non-conforming upload is an outcome, not a failure
    }
    if (response.status >= 400) {
      throw new ApiError(response.status, (await response.json()) as ApiErrorBody);
    }
    return response;
  }

  async login(login: string, password: string): Promise<LoginResponse> {
    const response = await this.request("POST", "/auth/login", { login, password });
    const body = (await response.json()) as LoginResponse;
    this.token = body.token;
    return body;
  }

  async me(): Promise<User> {
    return (await (await this.request("GET", "/users/me")).json()) as User;
  }

  async createUser(login: string, password: string, role: string): Promise<unknown> {
    return (await this.request("POST", "/users", { login, password, role })).json();
  }

  async corpora(): Promise<CorpusSummary[]> {
    return (await (await this.request("GET", "/corpora")).json()) as CorpusSummary[];
  }

  async scanFolder(path: string): Promise<CorpusSummary> {
    return (await (
      await this.request("POST", "/corpora/folder-scan", { path })
    ).json()) as CorpusSummary;
  }

  async campaigns(): Promise<CampaignSummary[]> {
    return (await (await this.request("GET", "/campaigns")).json()) as CampaignSummary[];
  }

  async createCampaign(
    name: string,
    corpusId: string,
    scheme: SchemeDoc,
  ): Promise<{ id: string; name: string }> {
    return (await (
      await this.request("POST", "/campaigns", { name, corpus_id: corpusId, scheme })
    ).json()) as { id: string; name: string };
  }

  async progress(campaignId: string): Promise<Progress> {
    return (await (
      await this.request("GET", `/campaigns/${campaignId}/progress`)
    ).json()) as Progress;
  }

  async campaignTasks(campaignId: string): Promise<TaskSummary[]> {
    return (await (
      await this.request("GET", `/campaigns/${campaignId}/tasks`)
    ).json()) as TaskSummary[];
  }

  async gammaCsv(campaignId: string): Promise<string> {
    return (await this.request("GET", `/campaigns/${campaignId}/gamma.csv`)).text();
  }

  async assignTask(campaignId: string, body: Record<string, unknown>): Promise<unknown> {
    return (await this.request("POST", `/campaigns/${campaignId}/tasks`, body)).json();
  }

  async myTasks(): Promise<TaskSummary[]> {
    return (await (await this.request("GET", "/tasks/mine")).json()) as TaskSummary[];
  }

  async task(taskId: string): Promise<TaskSummary> {
    return (await (await this.request("GET", `/tasks/${taskId}`)).json()) as TaskSummary;
  }

  async history(taskId: string): Promise<HistoryEntry[]> {
    return (await (
      await this.request("GET", `/tasks/${taskId}/history`)
    ).json()) as HistoryEntry[];
  }

  templateUrl(taskId: string): string {
    return `${this.baseUrl}/tasks/${taskId}/template`;
  }

  audioUrl(taskId: string): string {
    return `${this.baseUrl}/tasks/${taskId}/audio`;
  }

  async submit(
    taskId: string,
    filename: string,
    data: Blob | Uint8Array | string,
  ): Promise<{ status: number; outcome: SubmissionOutcome }> {
    const response = await this.request("POST", `/tasks/${taskId}/submission`, undefined, {
      filename,
      data,
    });
    return { status: response.status, outcome: (await response.json()) as SubmissionOutcome };
  }
}

/**
 * The endpoint families of the public API description. Traffic-recording
 * tests normalize recorded paths with `normalizePath` and assert
 * membership here.
 */
export const DOCUMENTED_ENDPOINTS = new Set([
  "POST /auth/login",
  "POST /users",
  "GET /users/me",
  "POST /corpora/folder-scan",
  "POST /corpora/csv",
  "GET /corpora",
  "POST /campaigns",
  "GET /campaigns",
  "GET /campaigns/{id}/progress",
  "GET /campaigns/{id}/tasks",
  "POST /campaigns/{id}/tasks",
  "GET /campaigns/{id}/gamma.csv",
  "GET /tasks/mine",
  "GET /tasks/{id}",
  "GET /tasks/{id}/template",
  "GET /tasks/{id}/audio",
  "POST /tasks/{id}/submission",
  "GET /tasks/{id}/history",
  "GET /blobs/{id}",
]);

export function normalizePath(method: string, path: string): string {
  const normalized = path
    .replace(/^\/campaigns\/[^/]+/, "/campaigns/{id}")
    .replace(/^\/tasks\/(?!mine$)[^/]+/, "/tasks/{id}")
    .replace(/^\/blobs\/[^/]+/, "/blobs/{id}");
  return `${method} ${normalized}`;
}
