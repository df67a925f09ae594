"""Value records of the scanner: recommendations, ledger entries, stats."""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import datetime
from enum import Enum

from ..core import Outcome, bet_profit
from ..data import format_timestamp


class RecStatus(str, Enum):
    PENDING = "pending"
    PLACED = "placed"
    EXPIRED = "expired"
    SUPERSEDED = "superseded"


class BetMode(str, Enum):
    PAPER = "paper"
    REAL = "real"


class Settlement(str, Enum):
    OPEN = "open"
    WON = "won"
    LOST = "lost"
    VOID = "void"


@dataclass(frozen=True, slots=True)
class Recommendation:
    """A qualifying value-bet surfaced to the operator."""

    id: int
    game_id: str
    league: str
    home_team: str
    away_team: str
    outcome: Outcome
    best_odds: float
    best_bookmaker: str
    mean_odds: float
    median_odds: float
    p_cons: float
    threshold: float
    kickoff: datetime
    created_at: datetime
    updated_at: datetime
    status: RecStatus

    def with_status(self, status: RecStatus, at: datetime) -> "Recommendation":
        return replace(self, status=status, updated_at=at)

    def to_dict(self, now: datetime | None = None) -> dict:
        out = {
            "id": self.id,
            "game_id": self.game_id,
            "league": self.league,
            "home_team": self.home_team,
            "away_team": self.away_team,
            "match_title": f"{self.home_team} vs. {self.away_team}",
            "outcome": self.outcome.code,
            "best_odds": self.best_odds,
            "best_bookmaker": self.best_bookmaker,
            "mean_odds": self.mean_odds,
            "median_odds": self.median_odds,
            "p_cons": self.p_cons,
            "threshold": self.threshold,
            "kickoff": format_timestamp(self.kickoff),
            "created_at": format_timestamp(self.created_at),
            "updated_at": format_timestamp(self.updated_at),
            "status": self.status.value,
        }
        if now is not None:
            out["time_to_match_s"] = (self.kickoff - now).total_seconds()
        return out


@dataclass(frozen=True, slots=True)
class LedgerEntry:
    """A placed bet; settle-once, append-only bookkeeping."""

    id: int
    recommendation_id: int
    game_id: str
    match_title: str
    league: str
    outcome: Outcome
    placed_at: datetime
    mode: BetMode
    requested_stake: float
    accepted_stake: float
    odds_at_placement: float
    bookmaker: str
    settlement: Settlement
    profit: float
    limit_event: str | None = None
    settled_at: datetime | None = None

    def settled(self, result: Settlement, at: datetime) -> "LedgerEntry":
        if result is Settlement.WON:
            profit = bet_profit(self.accepted_stake, self.odds_at_placement, True)
        elif result is Settlement.LOST:
            profit = -self.accepted_stake
        else:
            profit = 0.0
        return replace(self, settlement=result, profit=profit, settled_at=at)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "recommendation_id": self.recommendation_id,
            "game_id": self.game_id,
            "match_title": self.match_title,
            "league": self.league,
            "outcome": self.outcome.code,
            "placed_at": format_timestamp(self.placed_at),
            "mode": self.mode.value,
            "requested_stake": self.requested_stake,
            "accepted_stake": self.accepted_stake,
            "odds_at_placement": self.odds_at_placement,
            "bookmaker": self.bookmaker,
            "settlement": self.settlement.value,
            "profit": self.profit,
            "limit_event": self.limit_event,
            "settled_at": format_timestamp(self.settled_at) if self.settled_at else None,
        }


@dataclass(frozen=True, slots=True)
class LedgerStats:
    """Dashboard header numbers; a pure fold over the ledger."""

    total_bets: int
    total_profit: float
    accuracy: float
    mean_odds: float

    @classmethod
    def from_entries(cls, entries: list[LedgerEntry]) -> "LedgerStats":
        wins = sum(1 for e in entries if e.settlement is Settlement.WON)
        losses = sum(1 for e in entries if e.settlement is Settlement.LOST)
        decided = wins + losses  # voids and open bets stay out of the accuracy
        return cls(
            total_bets=len(entries),
            total_profit=round(sum(e.profit for e in entries), 2),
            accuracy=wins / decided if decided else 0.0,
            mean_odds=sum(e.odds_at_placement for e in entries) / len(entries) if entries else 0.0,
        )

    def to_dict(self) -> dict:
        return {
            "total_bets": self.total_bets,
            "total_profit": self.total_profit,
            "accuracy": self.accuracy,
            "mean_odds": self.mean_odds,
        }
