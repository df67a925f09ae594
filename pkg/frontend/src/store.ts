/** Dashboard state and operator actions.
 *
 * The store never computes financial values on its own: profits, totals and
 * accuracy are always taken from server responses, and the totals bar keeps
 * the raw /stats body so what is displayed is byte-equal to what was served.
 */

import { ApiClient } from "./api.js";
import { ApiError, LedgerEntry, Recommendation, Stats } from "./types.js";

export type Listener = () => void;

export class DashboardStore {
  recommendations: Recommendation[] = [];
  ledger: LedgerEntry[] = [];
  stats: Stats | null = null;
  statsRaw = "";
  connected = true;
  feedStatus = "unknown";
  /** Inline error messages keyed by recommendation or entry id. */
  actionErrors = new Map<string, string>();

  private inFlight = new Set<string>();
  private listeners: Listener[] = [];

  constructor(private readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const l of this.listeners) l();
  }

  /** One polling round; on connection loss the banner flips, data is kept. */
  async refresh(): Promise<void> {
    try {
      const [recs, entries, stats, health] = await Promise.all([
        this.api.pendingRecommendations(),
        this.api.ledger(),
        this.api.stats(),
        this.api.health(),
      ]);
      this.recommendations = recs;
      this.ledger = entries;
      this.stats = stats.stats;
      this.statsRaw = stats.raw;
      this.feedStatus = health.status;
      this.connected = true;
    } catch (err) {
      if (err instanceof ApiError) throw err; // server answered: a real bug
      this.connected = false;
    }
    this.notify();
  }

  /**
   * Operator confirms a bet: stake defaults to 50, a lower bookmaker-accepted
   * stake may be recorded. Guarded against double submission; the row moves
   * to the ledger only when the server confirms.
   */
  async placeBet(
    recommendationId: number,
    requestedStake: number,
    acceptedStake: number | null,
    mode: "paper" | "real",
    note?: string,
  ): Promise<LedgerEntry | null> {
    const key = `rec:${recommendationId}`;
    if (this.inFlight.has(key)) return null;
    this.inFlight.add(key);
    this.actionErrors.delete(key);
    try {
      const entry = await this.api.placeBet(recommendationId, requestedStake, acceptedStake, mode, note);
      this.recommendations = this.recommendations.filter((r) => r.id !== recommendationId);
      this.ledger = [entry, ...this.ledger];
      await this.refreshTotals();
      return entry;
    } catch (err) {
      if (err instanceof ApiError) {
        this.actionErrors.set(key, `${err.code}: ${err.message}`);
        if (err.code === "already_placed" || err.code === "recommendation_expired") {
          this.recommendations = this.recommendations.filter((r) => r.id !== recommendationId);
        }
        return null;
      }
      this.connected = false;
      return null;
    } finally {
      this.inFlight.delete(key);
      this.notify();
    }
  }

  /** Operator records the match result; totals come back from the server. */
  async settle(entryId: number, result: "won" | "lost" | "void"): Promise<LedgerEntry | null> {
    const key = `entry:${entryId}`;
    if (this.inFlight.has(key)) return null;
    this.inFlight.add(key);
    this.actionErrors.delete(key);
    try {
      const settled = await this.api.settleBet(entryId, result);
      this.ledger = this.ledger.map((e) => (e.id === settled.id ? settled : e));
      await this.refreshTotals();
      return settled;
    } catch (err) {
      if (err instanceof ApiError) {
        this.actionErrors.set(key, `${err.code}: ${err.message}`);
        return null;
      }
      this.connected = false;
      return null;
    } finally {
      this.inFlight.delete(key);
      this.notify();
    }
  }

  private async refreshTotals(): Promise<void> {
    const stats = await this.api.stats();
    this.stats = stats.stats;
    this.statsRaw = stats.raw;
  }
}

export class Poller {
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly store: DashboardStore,
    private readonly intervalMs = 5000,
  ) {}

  start(): void {
    if (this.timer) return;
    void this.store.refresh();
    this.timer = setInterval(() => void this.store.refresh(), this.intervalMs);
  }

  stop(): void {
    if (this.timer) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
