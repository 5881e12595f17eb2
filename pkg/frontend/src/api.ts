/** Typed client for the session API. The fetch function is injected so
 * tests can run without a browser or a server. */

import type {
  AskResponseWire,
  BetaValue,
  PatchResponseWire,
  SessionWire,
  TraceResponseWire,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function parseError(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    detail = typeof body.detail === "string" ? body.detail : JSON.stringify(body.detail);
  } catch {
    // keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: { "content-type": "application/json" } };
    if (body !== undefined) {
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (!response.ok) {
      await parseError(response);
    }
    return (await response.json()) as T;
  }

  createSession(): Promise<{ id: string }> {
    return this.request("POST", "/sessions");
  }

  getSession(sessionId: string): Promise<SessionWire> {
    return this.request("GET", `/sessions/${sessionId}`);
  }

  ask(sessionId: string, question: string): Promise<AskResponseWire> {
    return this.request("POST", `/sessions/${sessionId}/ask`, { question });
  }

  choose(sessionId: string, index: number): Promise<AskResponseWire> {
    return this.request("POST", `/sessions/${sessionId}/choose`, { index });
  }

  patchBeta(sessionId: string, beta: BetaValue): Promise<PatchResponseWire> {
    return this.request("PATCH", `/sessions/${sessionId}/config`, { beta });
  }

  getTrace(sessionId: string, turn: number): Promise<TraceResponseWire> {
    return this.request("GET", `/sessions/${sessionId}/trace/${turn}`);
  }
}
