"""Cross-validation of the live engine against the offline backtester.

Feeding the same quote series through an auto-placing engine and through the
time-series backtest must yield the identical set of bets; any difference is
a finding, reported bet by bet.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..backtest import run_timeseries_backtest
from ..core import StrategyConfig
from ..data import Dataset, format_timestamp, subset
from ..errors import NoEligibleGames
from .engine import ScannerEngine
from .store import ScannerStore

BetKey = tuple[str, str, float, str]  # game_id, outcome code, odds, timestamp


@dataclass(frozen=True)
class EquivalenceReport:
    backtest_bets: tuple[BetKey, ...]
    scanner_bets: tuple[BetKey, ...]
    only_backtest: tuple[BetKey, ...]
    only_scanner: tuple[BetKey, ...]

    @property
    def equivalent(self) -> bool:
        return not self.only_backtest and not self.only_scanner

    def to_dict(self) -> dict:
        return {
            "equivalent": self.equivalent,
            "n_backtest_bets": len(self.backtest_bets),
            "n_scanner_bets": len(self.scanner_bets),
            "only_backtest": [list(k) for k in self.only_backtest],
            "only_scanner": [list(k) for k in self.only_scanner],
        }


def replay_equivalence(dataset: Dataset, config: StrategyConfig = StrategyConfig()) -> EquivalenceReport:
    """Run both paths over the settled games of a quote-stream dataset.

    The engine gets a fresh in-memory store and full-stake auto-placement;
    unsettled games are excluded because the backtester cannot settle them.
    """
    settled = subset(dataset, [g.game_id for g in dataset.settled_games()])

    try:
        report = run_timeseries_backtest(settled, config)
        backtest_bets = {
            (b.game_id, b.outcome.code, b.odds, format_timestamp(b.placed_at)) for b in report.bets
        }
    except NoEligibleGames:
        backtest_bets = set()

    engine = ScannerEngine(ScannerStore(":memory:"), config, auto_place=True)
    engine.register_games(settled.games.values())
    engine.ingest(settled.quotes)
    scanner_bets = {
        (e.game_id, e.outcome.code, e.odds_at_placement, format_timestamp(e.placed_at))
        for e in engine.auto_entries
    }

    return EquivalenceReport(
        backtest_bets=tuple(sorted(backtest_bets)),
        scanner_bets=tuple(sorted(scanner_bets)),
        only_backtest=tuple(sorted(backtest_bets - scanner_bets)),
        only_scanner=tuple(sorted(scanner_bets - backtest_bets)),
    )
