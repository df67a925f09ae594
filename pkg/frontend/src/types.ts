/** Payload shapes of the scanner HTTP API. */

export interface Recommendation {
  id: number;
  game_id: string;
  league: string;
  home_team: string;
  away_team: string;
  match_title: string;
  outcome: "1" | "X" | "2";
  best_odds: number;
  best_bookmaker: string;
  mean_odds: number;
  median_odds: number;
  p_cons: number;
  threshold: number;
  kickoff: string; // ISO-8601 UTC
  created_at: string;
  updated_at: string;
  status: "pending" | "placed" | "expired" | "superseded";
  time_to_match_s?: number;
}

export interface LedgerEntry {
  id: number;
  recommendation_id: number;
  game_id: string;
  match_title: string;
  league: string;
  outcome: "1" | "X" | "2";
  placed_at: string;
  mode: "paper" | "real";
  requested_stake: number;
  accepted_stake: number;
  odds_at_placement: number;
  bookmaker: string;
  settlement: "open" | "won" | "lost" | "void";
  profit: number;
  limit_event: string | null;
  settled_at: string | null;
}

export interface Stats {
  total_bets: number;
  total_profit: number;
  accuracy: number;
  mean_odds: number;
}

export interface Health {
  status: string;
  events_seen: number;
  last_event_at: string | null;
}

export interface ApiErrorBody {
  error: { code: string; message: string };
}

export class ApiError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}
