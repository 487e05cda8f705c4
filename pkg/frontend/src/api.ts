/**
 * Thin client for the fingerspell service's /v1 endpoints.  All traffic to
 * the recognizer goes through here; the fetch implementation is injectable
 * so tests can run against a scripted stub instead of a live server.
 */

import type { FrameResponse, ServiceInfo, SessionMetrics } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

/** Bytes acceptable as a frame upload body. */
export type FrameBody = Blob | ArrayBuffer | Uint8Array<ArrayBuffer>;

/** Error carrying the HTTP status and the service's error message. */
export class ServiceError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(`service responded ${status}: ${message}`);
    this.name = "ServiceError";
  }
}

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = await response.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through to the status text
  }
  return response.statusText || "unknown error";
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    if (!response.ok) {
      throw new ServiceError(response.status, await errorMessage(response));
    }
    return response;
  }

  /** GET /v1/healthz — service liveness and version. */
  async health(): Promise<ServiceInfo> {
    const response = await this.request("/v1/healthz");
    return (await response.json()) as ServiceInfo;
  }

  /** POST /v1/recognize — classify a single frame with no session state. */
  async recognize(png: FrameBody): Promise<FrameResponse> {
    const response = await this.request("/v1/recognize", {
      method: "POST",
      headers: { "Content-Type": "image/png" },
      body: png,
    });
    return (await response.json()) as FrameResponse;
  }

  /** POST /v1/sessions — returns the new session id. */
  async createSession(): Promise<string> {
    const response = await this.request("/v1/sessions", { method: "POST" });
    const body = (await response.json()) as { id: string };
    return body.id;
  }

  /** POST /v1/sessions/{id}/frames — classify and debounce one frame. */
  async postFrame(sessionId: string, png: FrameBody): Promise<FrameResponse> {
    const response = await this.request(
      `/v1/sessions/${encodeURIComponent(sessionId)}/frames`,
      {
        method: "POST",
        headers: { "Content-Type": "image/png" },
        body: png,
      },
    );
    return (await response.json()) as FrameResponse;
  }

  /** DELETE /v1/sessions/{id} — returns the session's final metrics. */
  async endSession(sessionId: string): Promise<SessionMetrics> {
    const response = await this.request(
      `/v1/sessions/${encodeURIComponent(sessionId)}`,
      { method: "DELETE" },
    );
    return (await response.json()) as SessionMetrics;
  }
}
