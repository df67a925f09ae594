import { describe, expect, it } from "vitest";

import { ApiClient, FetchFn } from "../src/api.js";
import { DashboardStore } from "../src/store.js";

/** Scriptable fake server: maps "METHOD path" to responses. */
function fakeFetch(routes: Record<string, () => { status?: number; body: unknown }>): {
  fetchFn: FetchFn;
  calls: string[];
} {
  const calls: string[] = [];
  const fetchFn: FetchFn = async (input, init) => {
    const method = init?.method ?? "GET";
    const path = input.replace(/^https?:\/\/[^/]+/, "");
    const key = `${method} ${path}`;
    calls.push(key);
    const route = routes[key];
    if (!route) return new Response("not routed", { status: 500 });
    const { status = 200, body } = route();
    return new Response(typeof body === "string" ? body : JSON.stringify(body), {
      status,
      headers: { "content-type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

const REC = {
  id: 1,
  game_id: "g1",
  league: "L",
  home_team: "A",
  away_team: "B",
  match_title: "A vs. B",
  outcome: "1",
  best_odds: 1.62,
  best_bookmaker: "hill",
  mean_odds: 1.4825,
  median_odds: 1.445,
  p_cons: 0.6745,
  threshold: 1.6012,
  kickoff: "2026-08-10T15:00:00Z",
  created_at: "2026-08-10T12:00:00Z",
  updated_at: "2026-08-10T12:00:00Z",
  status: "pending",
};

const ENTRY = {
  id: 9,
  recommendation_id: 1,
  game_id: "g1",
  match_title: "A vs. B",
  league: "L",
  outcome: "1",
  placed_at: "2026-08-10T12:05:00Z",
  mode: "paper",
  requested_stake: 50,
  accepted_stake: 50,
  odds_at_placement: 1.62,
  bookmaker: "hill",
  settlement: "open",
  profit: 0,
  limit_event: null,
  settled_at: null,
};

const STATS_RAW = '{"total_bets":1,"total_profit":0.0,"accuracy":0.0,"mean_odds":1.62}';

function standardRoutes() {
  return {
    "GET /recommendations?status=pending": () => ({ body: { recommendations: [REC] } }),
    "GET /ledger": () => ({ body: { entries: [] } }),
    "GET /stats": () => ({ body: STATS_RAW }),
    "GET /health": () => ({ body: { status: "live", events_seen: 4, last_event_at: null } }),
    "POST /bets": () => ({ body: ENTRY }),
    "POST /bets/9/settle": () => ({
      body: { entry: { ...ENTRY, settlement: "won", profit: 31.0 }, stats: JSON.parse(STATS_RAW) },
    }),
  };
}

describe("refresh", () => {
  it("pulls all four endpoints and stores the raw stats body", async () => {
    const { fetchFn } = fakeFetch(standardRoutes());
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();
    expect(store.recommendations).toHaveLength(1);
    expect(store.connected).toBe(true);
    expect(store.statsRaw).toBe(STATS_RAW);
    expect(store.feedStatus).toBe("live");
  });

  it("drops a row once the server expires the recommendation", async () => {
    const routes = standardRoutes();
    let pending: unknown[] = [REC];
    routes["GET /recommendations?status=pending"] = () => ({ body: { recommendations: pending } });
    const { fetchFn } = fakeFetch(routes);
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();
    expect(store.recommendations).toHaveLength(1);
    pending = []; // server-side expiry between polls
    await store.refresh();
    expect(store.recommendations).toHaveLength(0);
  });

  it("flips the banner on connection loss and keeps data", async () => {
    const routes = standardRoutes();
    const { fetchFn } = fakeFetch(routes);
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();

    const failing: FetchFn = async () => {
      throw new TypeError("network down");
    };
    const broken = new DashboardStore(new ApiClient("http://x", failing));
    broken.recommendations = store.recommendations;
    await broken.refresh();
    expect(broken.connected).toBe(false);
    expect(broken.recommendations).toHaveLength(1); // retained
  });
});

describe("place flow", () => {
  it("moves the row to the ledger after server confirmation", async () => {
    const { fetchFn } = fakeFetch(standardRoutes());
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();
    const placed = await store.placeBet(1, 50, null, "paper");
    expect(placed?.id).toBe(9);
    expect(store.recommendations).toHaveLength(0);
    expect(store.ledger.map((e) => e.id)).toEqual([9]);
  });

  it("double submission sends a single request", async () => {
    const routes = standardRoutes();
    let resolveBet: (() => void) | null = null;
    routes["POST /bets"] = () => ({ body: ENTRY });
    const { fetchFn, calls } = fakeFetch(routes);
    const slowFetch: FetchFn = async (input, init) => {
      if ((init?.method ?? "GET") === "POST" && input.endsWith("/bets")) {
        await new Promise<void>((resolve) => {
          resolveBet = resolve;
          setTimeout(resolve, 20);
        });
      }
      return fetchFn(input, init);
    };
    const store = new DashboardStore(new ApiClient("http://x", slowFetch));
    await store.refresh();
    const [first, second] = await Promise.all([
      store.placeBet(1, 50, null, "paper"),
      store.placeBet(1, 50, null, "paper"),
    ]);
    expect(resolveBet).not.toBeNull();
    expect([first, second].filter((e) => e !== null)).toHaveLength(1);
    expect(calls.filter((c) => c === "POST /bets")).toHaveLength(1);
  });

  it("surfaces already_placed inline and drops the row", async () => {
    const routes = standardRoutes();
    routes["POST /bets"] = () => ({
      status: 409,
      body: { error: { code: "already_placed", message: "game g1 already has a placed bet" } },
    });
    const { fetchFn } = fakeFetch(routes);
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();
    const placed = await store.placeBet(1, 50, null, "paper");
    expect(placed).toBeNull();
    expect(store.actionErrors.get("rec:1")).toContain("already_placed");
    expect(store.recommendations).toHaveLength(0);
  });
});

describe("settle flow", () => {
  it("updates the row and refreshes totals from the server", async () => {
    const routes = standardRoutes();
    const settledStats = '{"total_bets":1,"total_profit":31.0,"accuracy":1.0,"mean_odds":1.62}';
    let statsBody = STATS_RAW;
    routes["GET /stats"] = () => ({ body: statsBody });
    routes["POST /bets/9/settle"] = () => {
      statsBody = settledStats;
      return { body: { entry: { ...ENTRY, settlement: "won", profit: 31.0 }, stats: JSON.parse(settledStats) } };
    };
    const { fetchFn } = fakeFetch(routes);
    const store = new DashboardStore(new ApiClient("http://x", fetchFn));
    await store.refresh();
    await store.placeBet(1, 50, null, "paper");
    const settled = await store.settle(9, "won");
    expect(settled?.profit).toBe(31.0);
    expect(store.ledger[0].settlement).toBe("won");
    expect(store.statsRaw).toBe(settledStats); // no client-side totals math
  });
});
