"""Event-driven gate evaluation, recommendation lifecycle and the bet ledger.

All state mutation funnels through one re-entrant lock, so feed ingestion,
operator placements and settlements apply as a single serialized command
stream; readers always observe a consistent snapshot.

Recommendations are created only when a quote arriving inside the betting
window makes a market qualify — the timer sweep merely expires them — which
keeps an auto-placing engine bet-for-bet identical to the offline
time-series backtester over the same event series.
"""

from __future__ import annotations

import logging
import threading
from datetime import datetime, timezone
from typing import Iterable

from ..backtest import in_window
from ..core import Outcome, StrategyConfig, estimate_from_values, should_bet
from ..data import GameRecord, QuoteEvent, iter_event_batches
from ..errors import (
    AlreadyPlaced,
    AlreadySettled,
    InsufficientQuotes,
    InvalidStake,
    RecommendationExpired,
)
from .models import BetMode, LedgerEntry, LedgerStats, RecStatus, Recommendation, Settlement
from .store import ScannerStore

logger = logging.getLogger(__name__)


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class ScannerEngine:
    """Owns books, recommendations and the ledger behind a command lock."""

    def __init__(
        self,
        store: ScannerStore,
        config: StrategyConfig = StrategyConfig(),
        auto_place: bool = False,
        auto_mode: BetMode = BetMode.PAPER,
    ):
        self.store = store
        self.config = config
        self.auto_place = auto_place
        self.auto_mode = auto_mode
        self.games: dict[str, GameRecord] = {}
        self.books: dict[tuple[str, Outcome], dict[str, float]] = {}
        self.placed_games: set[str] = store.placed_game_ids()
        self.clock: datetime | None = None
        self.auto_entries: list[LedgerEntry] = []
        self._lock = threading.RLock()

    # -- game universe -------------------------------------------------------

    def register_game(self, game: GameRecord) -> None:
        with self._lock:
            self.games[game.game_id] = game

    def register_games(self, games: Iterable[GameRecord]) -> None:
        for g in games:
            self.register_game(g)

    # -- feed ingestion -------------------------------------------------------

    def ingest(self, events: Iterable[QuoteEvent]) -> None:
        """Consume a time-ordered event stream, batch by (timestamp, game)."""
        for at, game_id, batch in iter_event_batches(events):
            self.process_batch(at, game_id, batch)

    def process_batch(self, at: datetime, game_id: str, events: list[QuoteEvent]) -> None:
        with self._lock:
            if self.clock is None or at > self.clock:
                self.clock = at
            self.scan_tick(at)
            touched: list[Outcome] = []
            for ev in events:
                book = self.books.setdefault((game_id, ev.outcome), {})
                book[ev.bookmaker_id] = ev.odds
                if ev.outcome not in touched:
                    touched.append(ev.outcome)
            game = self.games.get(game_id)
            if game is None:
                logger.warning("quote for unregistered game %s dropped", game_id)
                return
            if not in_window(game, at, self.config):
                return
            self._evaluate(game, sorted(touched, key=lambda o: o.index), at)

    def _evaluate(self, game: GameRecord, outcomes: list[Outcome], at: datetime) -> None:
        if game.game_id in self.placed_games:
            return
        qualifying: list[Recommendation] = []
        for outcome in outcomes:
            book = self.books.get((game.game_id, outcome), {})
            try:
                estimate = estimate_from_values(game.game_id, outcome, book, self.config.min_quotes)
            except InsufficientQuotes:
                continue
            decision = should_bet(estimate, self.config)
            logger.debug(
                "gate game=%s outcome=%s p_cons=%.6f threshold=%s best=%.4f@%s qualifies=%s",
                game.game_id,
                outcome.code,
                estimate.p_cons,
                f"{decision.threshold:.6f}" if decision.threshold else "n/a",
                estimate.max_odds,
                estimate.max_bookmaker,
                decision.qualifies,
            )
            existing = self.store.pending_for(game.game_id, outcome)
            if decision.qualifies:
                if existing is None:
                    rec = self.store.insert_recommendation(
                        Recommendation(
                            id=0,
                            game_id=game.game_id,
                            league=game.league,
                            home_team=game.home_team,
                            away_team=game.away_team,
                            outcome=outcome,
                            best_odds=estimate.max_odds,
                            best_bookmaker=estimate.max_bookmaker,
                            mean_odds=estimate.mean_odds,
                            median_odds=estimate.median_odds,
                            p_cons=estimate.p_cons,
                            threshold=decision.threshold,
                            kickoff=game.kickoff,
                            created_at=at,
                            updated_at=at,
                            status=RecStatus.PENDING,
                        )
                    )
                    logger.info(
                        "recommendation %d: %s %s best %.3f@%s threshold %.4f",
                        rec.id,
                        game.game_id,
                        outcome.code,
                        rec.best_odds,
                        rec.best_bookmaker,
                        rec.threshold,
                    )
                else:
                    rec = Recommendation(
                        id=existing.id,
                        game_id=existing.game_id,
                        league=existing.league,
                        home_team=existing.home_team,
                        away_team=existing.away_team,
                        outcome=existing.outcome,
                        best_odds=estimate.max_odds,
                        best_bookmaker=estimate.max_bookmaker,
                        mean_odds=estimate.mean_odds,
                        median_odds=estimate.median_odds,
                        p_cons=estimate.p_cons,
                        threshold=decision.threshold,
                        kickoff=existing.kickoff,
                        created_at=existing.created_at,
                        updated_at=at,
                        status=RecStatus.PENDING,
                    )
                    self.store.update_recommendation(rec)
                qualifying.append(rec)
            elif existing is not None:
                # Odds fell back under the threshold: retire the recommendation.
                self.store.update_recommendation(existing.with_status(RecStatus.SUPERSEDED, at))
                logger.info("recommendation %d superseded (below threshold)", existing.id)

        if self.auto_place and qualifying:
            best = max(
                qualifying,
                key=lambda r: ((r.p_cons - self.config.alpha) * r.best_odds - 1.0, -r.outcome.index),
            )
            entry = self.place_bet(
                best.id,
                self.auto_mode,
                self.config.stake,
                now=at,
            )
            self.auto_entries.append(entry)

    # -- time-based transitions ------------------------------------------------

    def scan_tick(self, now: datetime | None = None) -> list[Recommendation]:
        """Expire pending recommendations whose betting window has closed."""
        now = now or _utcnow()
        changed = []
        with self._lock:
            if self.clock is None or now > self.clock:
                self.clock = now
            for rec in self.store.pending_recommendations():
                if now > rec.kickoff - self.config.window_close:
                    expired = rec.with_status(RecStatus.EXPIRED, now)
                    self.store.update_recommendation(expired)
                    changed.append(expired)
                    logger.info("recommendation %d expired", rec.id)
        return changed

    # -- operator commands ------------------------------------------------------

    def place_bet(
        self,
        recommendation_id: int,
        mode: BetMode,
        requested_stake: float,
        accepted_stake: float | None = None,
        note: str | None = None,
        now: datetime | None = None,
    ) -> LedgerEntry:
        """Turn a pending recommendation into an open ledger entry.

        Records the bookmaker-accepted stake when it was limited below the
        requested amount; all other pending recommendations for the same game
        are superseded (one bet per game).
        """
        now = now or _utcnow()
        with self._lock:
            rec = self.store.recommendation(recommendation_id)
            if rec.status is RecStatus.PLACED or rec.game_id in self.placed_games:
                raise AlreadyPlaced(f"game {rec.game_id} already has a placed bet")
            if rec.status is not RecStatus.PENDING:
                raise RecommendationExpired(f"recommendation {rec.id} is {rec.status.value}")
            if now > rec.kickoff - self.config.window_close:
                self.store.update_recommendation(rec.with_status(RecStatus.EXPIRED, now))
                raise RecommendationExpired(f"recommendation {rec.id} window closed")
            if requested_stake <= 0:
                raise InvalidStake("requested stake must be positive")
            if accepted_stake is None:
                accepted_stake = requested_stake
            if accepted_stake <= 0 or accepted_stake > requested_stake:
                raise InvalidStake("accepted stake must be positive and at most the requested stake")

            limit_event = note
            if accepted_stake < requested_stake and not note:
                limit_event = f"bookmaker limited stake to {accepted_stake:g} of {requested_stake:g}"

            entry = self.store.insert_entry(
                LedgerEntry(
                    id=0,
                    recommendation_id=rec.id,
                    game_id=rec.game_id,
                    match_title=f"{rec.home_team} vs. {rec.away_team}",
                    league=rec.league,
                    outcome=rec.outcome,
                    placed_at=now,
                    mode=mode,
                    requested_stake=requested_stake,
                    accepted_stake=accepted_stake,
                    odds_at_placement=rec.best_odds,
                    bookmaker=rec.best_bookmaker,
                    settlement=Settlement.OPEN,
                    profit=0.0,
                    limit_event=limit_event,
                )
            )
            self.store.update_recommendation(rec.with_status(RecStatus.PLACED, now))
            for other in self.store.pending_for_game(rec.game_id):
                self.store.update_recommendation(other.with_status(RecStatus.SUPERSEDED, now))
            self.placed_games.add(rec.game_id)
            logger.info(
                "placed bet %d: %s %s stake %.2f/%.2f at %.3f@%s (%s)",
                entry.id,
                rec.game_id,
                rec.outcome.code,
                accepted_stake,
                requested_stake,
                entry.odds_at_placement,
                entry.bookmaker,
                mode.value,
            )
            return entry

    def settle_bet(self, entry_id: int, result: Settlement, now: datetime | None = None) -> tuple[LedgerEntry, LedgerStats]:
        """Settle an open entry; retrying with the same result is a no-op."""
        if result is Settlement.OPEN:
            raise ValueError("cannot settle to open")
        now = now or _utcnow()
        with self._lock:
            entry = self.store.entry(entry_id)
            if entry.settlement is not Settlement.OPEN:
                if entry.settlement is result:
                    return entry, self.stats()
                raise AlreadySettled(
                    f"entry {entry_id} already settled as {entry.settlement.value}"
                )
            settled = entry.settled(result, now)
            self.store.update_entry(settled)
            logger.info("settled bet %d as %s, profit %.2f", entry_id, result.value, settled.profit)
            return settled, self.stats()

    # -- reads --------------------------------------------------------------------

    def recommendations(self, status: RecStatus | None = None) -> list[Recommendation]:
        with self._lock:
            return self.store.recommendations(status)

    def ledger(self, placed_from=None, placed_to=None) -> list[LedgerEntry]:
        with self._lock:
            return self.store.entries(placed_from, placed_to)

    def stats(self) -> LedgerStats:
        with self._lock:
            return LedgerStats.from_entries(self.store.entries())
