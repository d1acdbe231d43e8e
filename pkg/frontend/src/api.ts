import type { CellMode, CellResponse } from "./types.js";

export type FetchLike = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ ok: boolean; status: number; json(): Promise<unknown> }>;

/** Thin client for the session service; the UI never evaluates anything
 * itself and never talks to the raw TCP link. */
export class SessionClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  async runCell(source: string, mode: CellMode): Promise<CellResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/session/cell`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ source, mode }),
    });
    if (!response.ok) {
      throw new Error(`session service error: HTTP ${response.status}`);
    }
    return (await response.json()) as CellResponse;
  }

  async state(): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}/session/state`);
    if (!response.ok) {
      throw new Error(`session service error: HTTP ${response.status}`);
    }
    return response.json();
  }
}
