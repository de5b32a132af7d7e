/** Typed client for the explanation service. All numbers the UI shows come
 * from these responses; nothing is recomputed locally. */

import type {
  ApiErrorBody,
  CreateSessionResponse,
  ExplainResponse,
  HistoryResponse,
  Snapshot,
  SupportChoice,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly detail: unknown;

  constructor(status: number, body: ApiErrorBody) {
    super(body.message);
    this.status = status;
    this.code = body.code;
    this.detail = body.detail;
  }
}

export interface ExplainQuery {
  node: string;
  state: string;
  from: number;
  to: number;
  support: SupportChoice;
  rho?: number;
  epsBel?: number;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly baseUrl: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (response.status === 204) {
      return undefined as T;
    }
    if (!response.ok) {
      let body: ApiErrorBody;
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        body = { code: "unreachable", message: response.statusText };
      }
      throw new ApiError(response.status, body);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  createSession(networkDocument: unknown): Promise<CreateSessionResponse> {
    return this.post("/api/sessions", networkDocument);
  }

  ground(sessionId: string, node: string, state: string): Promise<Snapshot> {
    return this.post(`/api/sessions/${sessionId}/ground`, { node, state });
  }

  preview(sessionId: string, node: string, state: string): Promise<Snapshot> {
    return this.post(`/api/sessions/${sessionId}/preview`, { node, state });
  }

  history(sessionId: string): Promise<HistoryResponse> {
    return this.request(`/api/sessions/${sessionId}/history`);
  }

  explain(sessionId: string, query: ExplainQuery): Promise<ExplainResponse> {
    const params = new URLSearchParams({
      focal: `${query.node}.${query.state}`,
      from: String(query.from),
      to: String(query.to),
      support: query.support,
    });
    if (query.rho !== undefined) {
      params.set("rho", String(query.rho));
    }
    if (query.epsBel !== undefined) {
      params.set("eps_bel", String(query.epsBel));
    }
    return this.request(`/api/sessions/${sessionId}/explain?${params.toString()}`);
  }

  deleteSession(sessionId: string): Promise<void> {
    return this.request(`/api/sessions/${sessionId}`, { method: "DELETE" });
  }
}
