"""Random-bet bootstrap baseline.

Each rep samples games with replacement, draws an outcome per the configured
priors, stakes a fixed amount at the maximum odds offered across bookmakers
for that outcome, and settles against the recorded result. The distribution
of per-rep returns scores a strategy's return as a z-score and a one-sided
empirical p-value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import OUTCOMES
from .data import Dataset
from .errors import NoEligibleGames

DEFAULT_PRIORS = (0.595, 0.021, 0.384)
DEFAULT_REPS = 2000


@dataclass(frozen=True, slots=True)
class BootstrapConfig:
    """Bootstrap parameters; sample_size is matched to the strategy's bet count."""

    sample_size: int
    n_reps: int = DEFAULT_REPS
    outcome_priors: tuple[float, float, float] = DEFAULT_PRIORS
    stake: float = 50.0
    seed: int = 0

    def __post_init__(self) -> None:
        if abs(sum(self.outcome_priors) - 1.0) > 1e-9:
            raise ValueError("outcome priors must sum to 1")
        if self.n_reps < 1:
            raise ValueError("n_reps must be at least 1")
        if self.sample_size < 1:
            raise ValueError("sample_size must be at least 1")


@dataclass(frozen=True)
class BootstrapDistribution:
    """Per-rep returns plus the strategy's position inside the distribution."""

    returns: tuple[float, ...]
    mean: float
    std: float
    strategy_return: float | None = None
    z_score: float | None = None
    empirical_p: float | None = None
    normal_tail_p: float | None = None

    @property
    def n_reps(self) -> int:
        return len(self.returns)

    def to_dict(self, include_returns: bool = False) -> dict:
        out = {
            "n_reps": self.n_reps,
            "mean": self.mean,
            "std": self.std,
            "strategy_return": self.strategy_return,
            "z_score": self.z_score,
            "empirical_p": self.empirical_p,
            "empirical_p_display": None
            if self.empirical_p is None
            else (f"<{1 / self.n_reps:g}" if self.empirical_p == 0.0 else f"{self.empirical_p:g}"),
            "normal_tail_p": self.normal_tail_p,
        }
        if include_returns:
            out["returns"] = list(self.returns)
        return out


def _eligible_arrays(dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Max odds per outcome and result index for every fully quoted settled game."""
    max_odds = []
    results = []
    for game in dataset.games.values():
        if not game.settled:
            continue
        row = []
        for outcome in OUTCOMES:
            odds = game.outcome_odds(outcome)
            if not odds:
                break
            row.append(max(odds.values()))
        else:
            max_odds.append(row)
            results.append(game.result.index)
    if not max_odds:
        raise NoEligibleGames("no settled games quoted on all three outcomes")
    return np.array(max_odds), np.array(results)


def run_bootstrap(
    dataset: Dataset,
    config: BootstrapConfig,
    strategy_return: float | None = None,
) -> BootstrapDistribution:
    """Build the random-bet return distribution and score the strategy.

    Rep i draws from its own generator seeded by SeedSequence(seed).spawn()[i],
    so results are reproducible and independent of execution order.
    """
    max_odds, results = _eligible_arrays(dataset)
    n_games = len(results)
    cum_priors = np.cumsum(config.outcome_priors)
    cum_priors[-1] = 1.0  # guard against rounding in the final edge
    streams = np.random.SeedSequence(config.seed).spawn(config.n_reps)

    returns = np.empty(config.n_reps)
    total_staked = config.stake * config.sample_size
    for i in range(config.n_reps):
        rng = np.random.default_rng(streams[i])
        picks = rng.integers(0, n_games, size=config.sample_size)
        outcomes = np.searchsorted(cum_priors, rng.random(config.sample_size), side="right")
        odds = max_odds[picks, outcomes]
        won = results[picks] == outcomes
        profit = np.where(won, np.round(config.stake * (odds - 1.0), 2), -config.stake)
        returns[i] = profit.sum() / total_staked

    mean = float(returns.mean())
    std = float(returns.std())
    dist = BootstrapDistribution(returns=tuple(float(r) for r in returns), mean=mean, std=std)
    if strategy_return is None:
        return dist
    z = (strategy_return - mean) / std if std > 0 else math.inf
    return BootstrapDistribution(
        returns=dist.returns,
        mean=mean,
        std=std,
        strategy_return=strategy_return,
        z_score=z,
        empirical_p=empirical_p_value(dist, strategy_return),
        normal_tail_p=0.5 * math.erfc(z / math.sqrt(2.0)) if math.isfinite(z) else 0.0,
    )


def empirical_p_value(distribution: BootstrapDistribution, observed: float) -> float:
    """One-sided p: the fraction of reps with a return at or above `observed`."""
    if not distribution.returns:
        raise ValueError("empty distribution")
    at_or_above = sum(1 for r in distribution.returns if r >= observed)
    return at_or_above / len(distribution.returns)
