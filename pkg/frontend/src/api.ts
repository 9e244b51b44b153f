/** HTTP client for the clustering server; one /cut in flight at a time. */
import type { CutRequest, CutResponse } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

async function errorMessage(resp: Response): Promise<string> {
  try {
    const body = await resp.json();
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the status line
  }
  return `${resp.status} ${resp.statusText}`;
}

export class Client {
  private inflight: AbortController | null = null;

  constructor(readonly baseUrl: string) {}

  async decisionGraph(): Promise<unknown> {
    const resp = await fetch(`${this.baseUrl}/decision-graph`);
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    return resp.json();
  }

  async meta(): Promise<Record<string, unknown>> {
    const resp = await fetch(`${this.baseUrl}/meta`);
    if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
    return resp.json();
  }

  /** POST /cut; a newer call aborts any still-pending one. */
  async cut(spec: CutRequest): Promise<CutResponse> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    try {
      const resp = await fetch(`${this.baseUrl}/cut`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(spec),
        signal: controller.signal,
      });
      if (!resp.ok) throw new ApiError(resp.status, await errorMessage(resp));
      return (await resp.json()) as CutResponse;
    } finally {
      if (this.inflight === controller) this.inflight = null;
    }
  }
}
