/** Thin client over the scanner API; all money math stays server-side. */

import { ApiError, ApiErrorBody, Health, LedgerEntry, Recommendation, Stats } from "./types.js";

export type FetchFn = (input: string, init?: RequestInit) => Promise<Response>;

export interface StatsResponse {
  stats: Stats;
  /** Exact response body as sent by the server; the totals bar renders from this. */
  raw: string;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: FetchFn = (input, init) => fetch(input, init),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<string> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    const text = await resp.text();
    if (!resp.ok) {
      let code = `http_${resp.status}`;
      let message = text;
      try {
        const body = JSON.parse(text) as ApiErrorBody;
        if (body.error) {
          code = body.error.code;
          message = body.error.message;
        }
      } catch {
        // non-JSON error body; keep the raw text
      }
      throw new ApiError(code, message, resp.status);
    }
    return text;
  }

  async pendingRecommendations(): Promise<Recommendation[]> {
    const text = await this.request("/recommendations?status=pending");
    return (JSON.parse(text) as { recommendations: Recommendation[] }).recommendations;
  }

  async ledger(): Promise<LedgerEntry[]> {
    const text = await this.request("/ledger");
    return (JSON.parse(text) as { entries: LedgerEntry[] }).entries;
  }

  async stats(): Promise<StatsResponse> {
    const raw = await this.request("/stats");
    return { stats: JSON.parse(raw) as Stats, raw };
  }

  async health(): Promise<Health> {
    return JSON.parse(await this.request("/health")) as Health;
  }

  async placeBet(
    recommendationId: number,
    requestedStake: number,
    acceptedStake: number | null,
    mode: "paper" | "real",
    note?: string,
  ): Promise<LedgerEntry> {
    const text = await this.request("/bets", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({
        recommendation_id: recommendationId,
        mode,
        requested_stake: requestedStake,
        accepted_stake: acceptedStake,
        note: note ?? null,
      }),
    });
    return JSON.parse(text) as LedgerEntry;
  }

  async settleBet(entryId: number, result: "won" | "lost" | "void"): Promise<LedgerEntry> {
    const text = await this.request(`/bets/${entryId}/settle`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ result }),
    });
    return (JSON.parse(text) as { entry: LedgerEntry }).entry;
  }
}
