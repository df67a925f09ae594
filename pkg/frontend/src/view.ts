/** Row and totals-bar rendering: pure functions from state to HTML strings. */

import { countdown, escapeHtml, localDate, meanMedian, odds } from "./format.js";
import { LedgerEntry, Recommendation, Stats } from "./types.js";

export function recommendationRow(rec: Recommendation, now: Date, defaultStake = 50): string {
  return `<tr data-rec-id="${rec.id}">
    <td>${escapeHtml(rec.match_title)}</td>
    <td>${escapeHtml(rec.league)}</td>
    <td class="result-code">${rec.outcome}</td>
    <td>${localDate(rec.kickoff)}</td>
    <td class="countdown" data-kickoff="${rec.kickoff}">${countdown(rec.kickoff, now)}</td>
    <td>${escapeHtml(rec.best_bookmaker)}</td>
    <td class="odds">${odds(rec.best_odds)}</td>
    <td>${meanMedian(rec.mean_odds, rec.median_odds)}</td>
    <td>
      <input class="stake" type="number" step="0.01" min="0.01" value="${defaultStake}">
      <input class="accepted" type="number" step="0.01" min="0.01" placeholder="accepted">
      <select class="mode"><option value="paper">paper</option><option value="real">real</option></select>
      <button class="place">Bet</button>
    </td>
  </tr>`;
}

/** A bookmaker cut the stake below the request: surface it like the ledger does. */
export function limitBadge(entry: LedgerEntry): string | null {
  if (entry.accepted_stake < entry.requested_stake) {
    return entry.limit_event ?? `limited to ${entry.accepted_stake}`;
  }
  return entry.limit_event;
}

export function winLossCode(entry: LedgerEntry): string {
  switch (entry.settlement) {
    case "won":
      return "1";
    case "lost":
      return "-1";
    case "void":
      return "0";
    default:
      return "";
  }
}

export function ledgerRow(entry: LedgerEntry): string {
  const badge = limitBadge(entry);
  const settleControls =
    entry.settlement === "open"
      ? `<button class="settle" data-result="won">Won</button>
         <button class="settle" data-result="lost">Lost</button>
         <button class="settle" data-result="void">Void</button>`
      : "";
  return `<tr data-entry-id="${entry.id}" class="settled-${entry.settlement}">
    <td>${escapeHtml(entry.match_title)}</td>
    <td>${escapeHtml(entry.league)}</td>
    <td class="result-code">${entry.outcome}</td>
    <td>${localDate(entry.placed_at)}</td>
    <td class="odds">${odds(entry.odds_at_placement)}</td>
    <td>${escapeHtml(entry.bookmaker)}</td>
    <td>${entry.accepted_stake}${badge ? ` <span class="limit-badge" title="${escapeHtml(badge)}">limited</span>` : ""}</td>
    <td>${winLossCode(entry)}</td>
    <td class="profit">${entry.profit}</td>
    <td>${entry.mode}${settleControls}</td>
  </tr>`;
}

/** Totals straight off /stats; nothing here is recomputed client-side. */
export function totalsBar(stats: Stats | null): string {
  if (!stats) return "Total Bets: - | Total Profit: - | Accuracy: - | Mean odds: -";
  return (
    `Total Bets: ${stats.total_bets} | Total Profit: ${stats.total_profit} | ` +
    `Accuracy: ${stats.accuracy} | Mean odds: ${stats.mean_odds}`
  );
}

export function connectionBanner(connected: boolean, feedStatus: string): string {
  if (!connected) return `<div class="banner error">connection lost — showing last known data</div>`;
  if (feedStatus === "stalled") return `<div class="banner warn">quote feed stalled</div>`;
  return "";
}
