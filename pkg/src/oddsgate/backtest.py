"""Strategy backtests over closing odds and streaming quote series.

Both paths place at most one fixed-stake bet per game: every outcome whose
best offered odds clear the gate is a candidate, the one with the highest
modeled edge wins, and ties break in Home < Draw < Away order. Bets settle
at the odds recorded at decision time; the bankroll is unbounded (constant
stake regardless of running losses).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from datetime import datetime

import numpy as np

from .calibration import PUBLISHED_ALPHAS, CalibrationAlphas
from .core import (
    OUTCOMES,
    BetDecision,
    Outcome,
    StrategyConfig,
    bet_profit,
    estimate_from_values,
    should_bet,
)
from .data import Dataset, GameRecord, format_timestamp, iter_event_batches
from .errors import InsufficientQuotes, NoEligibleGames


@dataclass(frozen=True, slots=True)
class SimulatedBet:
    """One placed-and-settled bet of a backtest run."""

    game_id: str
    outcome: Outcome
    odds: float
    bookmaker: str
    stake: float
    placed_at: datetime | str  # event timestamp, or "closing"
    won: bool
    profit: float
    p_cons: float

    def to_dict(self) -> dict:
        return {
            "game_id": self.game_id,
            "outcome": self.outcome.code,
            "odds": self.odds,
            "bookmaker": self.bookmaker,
            "stake": self.stake,
            "placed_at": self.placed_at
            if isinstance(self.placed_at, str)
            else format_timestamp(self.placed_at),
            "won": self.won,
            "profit": self.profit,
            "p_cons": self.p_cons,
        }


@dataclass(frozen=True)
class BacktestReport:
    """Aggregate metrics of a backtest run.

    Yield and accuracy are derived from the stored totals, so the report is
    the single place the metric formulas live.
    """

    n_bets: int
    n_wins: int
    total_profit: float
    total_staked: float
    mean_odds: float
    std_odds: float
    expected_accuracy: float
    bankroll_curve: tuple[float, ...]
    config: dict
    bets: tuple[SimulatedBet, ...]
    seed: int | None = None
    games_without_window_quotes: int = 0

    @property
    def accuracy(self) -> float:
        return self.n_wins / self.n_bets

    @property
    def return_on_stake(self) -> float:
        """Yield: total profit over total money staked."""
        return self.total_profit / self.total_staked

    @classmethod
    def from_bets(
        cls,
        bets: list[SimulatedBet],
        config: StrategyConfig,
        alphas: CalibrationAlphas,
        seed: int | None = None,
        games_without_window_quotes: int = 0,
    ) -> "BacktestReport":
        if not bets:
            raise NoEligibleGames("no bets were placed")
        odds = np.array([b.odds for b in bets])
        curve = []
        running = 0.0
        for b in bets:
            running = round(running + b.profit, 2)
            curve.append(running)
        return cls(
            n_bets=len(bets),
            n_wins=sum(1 for b in bets if b.won),
            total_profit=round(sum(b.profit for b in bets), 2),
            total_staked=sum(b.stake for b in bets),
            mean_odds=float(odds.mean()),
            std_odds=float(odds.std()),
            expected_accuracy=expected_accuracy(bets, alphas),
            bankroll_curve=tuple(curve),
            config=_config_snapshot(config),
            bets=tuple(bets),
            seed=seed,
            games_without_window_quotes=games_without_window_quotes,
        )

    def to_dict(self, include_bets: bool = False) -> dict:
        out = {
            "n_bets": self.n_bets,
            "n_wins": self.n_wins,
            "accuracy": self.accuracy,
            "total_profit": self.total_profit,
            "total_staked": self.total_staked,
            "return_on_stake": self.return_on_stake,
            "mean_odds": self.mean_odds,
            "std_odds": self.std_odds,
            "expected_accuracy": self.expected_accuracy,
            "games_without_window_quotes": self.games_without_window_quotes,
            "config": self.config,
            "seed": self.seed,
        }
        if include_bets:
            out["bets"] = [b.to_dict() for b in self.bets]
        return out


def _config_snapshot(config: StrategyConfig) -> dict:
    return {
        "alpha": config.alpha,
        "stake": config.stake,
        "min_quotes": config.min_quotes,
        "window_open_hours": config.window_open.total_seconds() / 3600,
        "window_close_hours": config.window_close.total_seconds() / 3600,
    }


def expected_accuracy(bets: list[SimulatedBet], alphas: CalibrationAlphas) -> float:
    """Predicted hit rate: mean over bets of (consensus - outcome alpha)."""
    if not bets:
        raise NoEligibleGames("no bets to estimate accuracy for")
    return sum(b.p_cons - alphas.for_outcome(b.outcome) for b in bets) / len(bets)


def _pick_bet(decisions: list[BetDecision]) -> BetDecision | None:
    """Highest expected edge among qualifying outcomes; ties keep H<D<A order."""
    best = None
    for d in decisions:
        if not d.qualifies:
            continue
        if best is None or d.expected_edge > best.expected_edge:
            best = d
    return best


def run_closing_backtest(
    dataset: Dataset,
    config: StrategyConfig = StrategyConfig(),
    alphas: CalibrationAlphas = PUBLISHED_ALPHAS,
) -> BacktestReport:
    """Apply the gate to every settled game's closing odds.

    Games are processed in kickoff order so the bankroll curve is
    chronological. Raises NoEligibleGames when nothing qualifies.
    """
    games = sorted(dataset.settled_games(), key=lambda g: (g.kickoff, g.game_id))
    if not games:
        raise NoEligibleGames("dataset has no settled games")
    bets: list[SimulatedBet] = []
    for game in games:
        decisions = []
        for outcome in OUTCOMES:
            odds = game.outcome_odds(outcome)
            try:
                estimate = estimate_from_values(game.game_id, outcome, odds, config.min_quotes)
            except InsufficientQuotes:
                continue
            decisions.append(should_bet(estimate, config))
        chosen = _pick_bet(decisions)
        if chosen is None:
            continue
        won = game.result is chosen.estimate.outcome
        bets.append(
            SimulatedBet(
                game_id=game.game_id,
                outcome=chosen.estimate.outcome,
                odds=chosen.odds,
                bookmaker=chosen.bookmaker,
                stake=config.stake,
                placed_at="closing",
                won=won,
                profit=bet_profit(config.stake, chosen.odds, won),
                p_cons=chosen.estimate.p_cons,
            )
        )
    return BacktestReport.from_bets(bets, config, alphas)


def in_window(game: GameRecord, at: datetime, config: StrategyConfig) -> bool:
    """True when `at` lies inside [kickoff - window_open, kickoff - window_close]."""
    return game.kickoff - config.window_open <= at <= game.kickoff - config.window_close


def run_timeseries_backtest(
    dataset: Dataset,
    config: StrategyConfig = StrategyConfig(),
    alphas: CalibrationAlphas = PUBLISHED_ALPHAS,
) -> BacktestReport:
    """Replay the quote series and bet on the first qualifying in-window event.

    The latest quote per (game, bookmaker, outcome) is maintained throughout;
    the gate is re-evaluated only for the outcomes touched by each event
    batch, only inside the betting window, and only with information observed
    up to that moment. A game is frozen once a bet is placed.
    """
    if not dataset.has_quotes:
        raise NoEligibleGames("dataset has no quote series")
    books: dict[tuple[str, Outcome], dict[str, float]] = {}
    placed: set[str] = set()
    games_quoted: set[str] = set()
    games_quoted_in_window: set[str] = set()
    bets: list[SimulatedBet] = []

    for at, game_id, events in iter_event_batches(dataset.quotes):
        game = dataset.games[game_id]
        touched: list[Outcome] = []
        for ev in events:
            book = books.setdefault((game_id, ev.outcome), {})
            book[ev.bookmaker_id] = ev.odds
            if ev.outcome not in touched:
                touched.append(ev.outcome)
        if not game.settled:
            continue
        games_quoted.add(game_id)
        if not in_window(game, at, config):
            continue
        games_quoted_in_window.add(game_id)
        if game_id in placed:
            continue
        decisions = []
        for outcome in sorted(touched, key=lambda o: o.index):
            book = books.get((game_id, outcome), {})
            try:
                estimate = estimate_from_values(game_id, outcome, book, config.min_quotes)
            except InsufficientQuotes:
                continue
            decisions.append(should_bet(estimate, config))
        chosen = _pick_bet(decisions)
        if chosen is None:
            continue
        placed.add(game_id)
        won = game.result is chosen.estimate.outcome
        bets.append(
            SimulatedBet(
                game_id=game_id,
                outcome=chosen.estimate.outcome,
                odds=chosen.odds,
                bookmaker=chosen.bookmaker,
                stake=config.stake,
                placed_at=at,
                won=won,
                profit=bet_profit(config.stake, chosen.odds, won),
                p_cons=chosen.estimate.p_cons,
            )
        )
    return BacktestReport.from_bets(
        bets,
        config,
        alphas,
        games_without_window_quotes=len(games_quoted - games_quoted_in_window),
    )


@dataclass(frozen=True, slots=True)
class AlphaSweepRow:
    alpha: float
    n_bets: int
    return_on_stake: float
    total_profit: float
    accuracy: float


def sweep_alpha(
    dataset: Dataset,
    config: StrategyConfig,
    alphas: list[float],
    mode: str = "closing",
    calibration_alphas: CalibrationAlphas = PUBLISHED_ALPHAS,
) -> list[AlphaSweepRow]:
    """Re-run the backtest across a grid of alpha margins.

    Bet counts are non-increasing in alpha (the gate only tightens). Alphas
    where nothing qualifies produce a zero row.
    """
    if not alphas:
        raise ValueError("alpha grid must be nonempty")
    run = run_closing_backtest if mode == "closing" else run_timeseries_backtest
    rows = []
    for a in alphas:
        try:
            report = run(dataset, replace(config, alpha=a), calibration_alphas)
            rows.append(
                AlphaSweepRow(a, report.n_bets, report.return_on_stake, report.total_profit, report.accuracy)
            )
        except NoEligibleGames:
            rows.append(AlphaSweepRow(a, 0, 0.0, 0.0, math.nan))
    return rows


@dataclass(frozen=True)
class StalenessResult:
    drop_rate: float
    baseline_return: float
    returns: tuple[float, ...]
    mean_return: float
    std_return: float

    def to_dict(self) -> dict:
        return {
            "drop_rate": self.drop_rate,
            "baseline_return": self.baseline_return,
            "mean_return": self.mean_return,
            "std_return": self.std_return,
            "returns": list(self.returns),
        }


def simulate_staleness(
    dataset: Dataset,
    config: StrategyConfig,
    drop_rate: float,
    n_seeds: int = 20,
    seed: int = 0,
    mode: str = "closing",
    calibration_alphas: CalibrationAlphas = PUBLISHED_ALPHAS,
) -> StalenessResult:
    """Model stale odds by randomly discarding would-be bets.

    Each seed independently drops every bet with probability drop_rate and
    recomputes the return over the surviving bets. Seed streams derive from
    SeedSequence([seed, i]) so runs are reproducible and order-independent.
    """
    if not 0.0 <= drop_rate < 1.0:
        raise ValueError("drop_rate must be in [0, 1)")
    run = run_closing_backtest if mode == "closing" else run_timeseries_backtest
    base = run(dataset, config, calibration_alphas)
    profits = np.array([b.profit for b in base.bets])
    stakes = np.array([b.stake for b in base.bets])
    returns = []
    for i in range(n_seeds):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        keep = rng.random(len(profits)) >= drop_rate
        staked = float(stakes[keep].sum())
        # same cent-rounded total the report uses, so drop_rate 0 is exact
        returns.append(round(float(profits[keep].sum()), 2) / staked if staked > 0 else 0.0)
    arr = np.array(returns)
    return StalenessResult(
        drop_rate=drop_rate,
        baseline_return=base.return_on_stake,
        returns=tuple(returns),
        mean_return=float(arr.mean()),
        std_return=float(arr.std()),
    )
