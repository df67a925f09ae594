"""Consensus-probability calibration: binning, regression, and the alpha margins.

Games are binned by consensus probability; within each bin the fraction of
games where the outcome materialized is compared against the mean consensus.
An ordinary least-squares line through the populated bins yields a slope near
one and a negative intercept whose magnitude is the outcome's alpha margin.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .core import OUTCOMES, DEFAULT_MIN_QUOTES, Outcome, estimate_from_values
from .data import Dataset
from .errors import InsufficientBins, InsufficientQuotes, NoEligibleGames

logger = logging.getLogger(__name__)

DEFAULT_BIN_WIDTH = 0.0125
DEFAULT_MIN_BIN_COUNT = 100


@dataclass(frozen=True, slots=True)
class CalibrationBin:
    """One consensus-probability bin and its empirical outcome rate."""

    lower: float
    upper: float
    mean_p_cons: float
    empirical_rate: float
    n_games: int


@dataclass(frozen=True, slots=True)
class BinnedCalibration:
    """Binning result for one outcome; under-populated bins are kept separate."""

    outcome: Outcome
    bins: tuple[CalibrationBin, ...]
    excluded: tuple[CalibrationBin, ...]
    eligible_games: int


@dataclass(frozen=True, slots=True)
class RegressionFit:
    outcome: Outcome
    slope: float
    intercept: float
    r_squared: float
    n_bins: int


@dataclass(frozen=True, slots=True)
class CalibrationAlphas:
    """Per-outcome margins (negated regression intercepts), used by the
    expected-accuracy estimator, not by the betting gate."""

    alpha_home: float
    alpha_draw: float
    alpha_away: float

    def __post_init__(self) -> None:
        for a in (self.alpha_home, self.alpha_draw, self.alpha_away):
            if not -0.2 < a < 0.2:
                raise ValueError(f"alpha {a} outside the plausible (-0.2, 0.2) range")

    def for_outcome(self, outcome: Outcome) -> float:
        return (self.alpha_home, self.alpha_draw, self.alpha_away)[outcome.index]


# Reference margins from large-scale closing-odds calibrations; the default
# when no dataset-specific calibration has been run.
PUBLISHED_ALPHAS = CalibrationAlphas(0.034, 0.057, 0.037)


def bin_consensus(
    dataset: Dataset,
    outcome: Outcome,
    bin_width: float = DEFAULT_BIN_WIDTH,
    min_bin_count: int = DEFAULT_MIN_BIN_COUNT,
    min_quotes: int = DEFAULT_MIN_QUOTES,
) -> BinnedCalibration:
    """Bin settled games by consensus probability for one outcome.

    Bins are half-open [lower, upper) partitioning [0, 1). Games without
    enough quotes for the outcome are skipped; bins below min_bin_count are
    reported as excluded. Output is independent of game order.
    """
    n_bins = int(round(1.0 / bin_width))
    sums = np.zeros(n_bins)
    hits = np.zeros(n_bins, dtype=np.int64)
    counts = np.zeros(n_bins, dtype=np.int64)
    eligible = 0
    # Canonical game order makes the float accumulation independent of row order.
    for game in sorted(dataset.games.values(), key=lambda g: g.game_id):
        if not game.settled:
            continue
        odds = game.outcome_odds(outcome)
        try:
            estimate = estimate_from_values(game.game_id, outcome, odds, min_quotes)
        except InsufficientQuotes:
            continue
        eligible += 1
        idx = min(int(estimate.p_cons / bin_width), n_bins - 1)
        sums[idx] += estimate.p_cons
        counts[idx] += 1
        if game.result is outcome:
            hits[idx] += 1
    if eligible == 0:
        raise NoEligibleGames(f"no settled games with >= {min_quotes} quotes for {outcome.code}")

    included: list[CalibrationBin] = []
    excluded: list[CalibrationBin] = []
    for i in range(n_bins):
        if counts[i] == 0:
            continue
        b = CalibrationBin(
            lower=i * bin_width,
            upper=(i + 1) * bin_width,
            mean_p_cons=sums[i] / counts[i],
            empirical_rate=hits[i] / counts[i],
            n_games=int(counts[i]),
        )
        (included if counts[i] >= min_bin_count else excluded).append(b)
    return BinnedCalibration(
        outcome=outcome,
        bins=tuple(included),
        excluded=tuple(excluded),
        eligible_games=eligible,
    )


def fit_regression(binned: BinnedCalibration) -> RegressionFit:
    """Unweighted OLS of empirical rate on mean consensus across populated bins."""
    bins = binned.bins
    if len(bins) < 2:
        raise InsufficientBins(f"need >= 2 populated bins, have {len(bins)}")
    x = np.array([b.mean_p_cons for b in bins])
    y = np.array([b.empirical_rate for b in bins])
    slope, intercept = np.polyfit(x, y, 1)
    residuals = y - (slope * x + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return RegressionFit(
        outcome=binned.outcome,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r_squared,
        n_bins=len(bins),
    )


def derive_alphas(fits: dict[Outcome, RegressionFit] | list[RegressionFit]) -> CalibrationAlphas:
    """Alpha margins from per-outcome fits: alpha = -intercept."""
    if not isinstance(fits, dict):
        fits = {f.outcome: f for f in fits}
    values = []
    for outcome in OUTCOMES:
        fit = fits[outcome]
        alpha = -fit.intercept
        if alpha < 0:
            logger.warning(
                "positive intercept %.4f for %s gives a negative alpha", fit.intercept, outcome.code
            )
        values.append(alpha)
    return CalibrationAlphas(*values)


@dataclass(frozen=True)
class CalibrationReport:
    binned: dict[Outcome, BinnedCalibration]
    fits: dict[Outcome, RegressionFit]
    alphas: CalibrationAlphas

    def to_dict(self) -> dict:
        return {
            "outcomes": {
                o.code: {
                    "eligible_games": self.binned[o].eligible_games,
                    "n_bins": len(self.binned[o].bins),
                    "n_excluded_bins": len(self.binned[o].excluded),
                    "slope": self.fits[o].slope,
                    "intercept": self.fits[o].intercept,
                    "r_squared": self.fits[o].r_squared,
                }
                for o in OUTCOMES
            },
            "alphas": {
                "home": self.alphas.alpha_home,
                "draw": self.alphas.alpha_draw,
                "away": self.alphas.alpha_away,
            },
        }


def calibrate(
    dataset: Dataset,
    bin_width: float = DEFAULT_BIN_WIDTH,
    min_bin_count: int = DEFAULT_MIN_BIN_COUNT,
    min_quotes: int = DEFAULT_MIN_QUOTES,
) -> CalibrationReport:
    """Full three-outcome calibration: bins, fits and the derived alphas."""
    binned = {o: bin_consensus(dataset, o, bin_width, min_bin_count, min_quotes) for o in OUTCOMES}
    fits = {o: fit_regression(binned[o]) for o in OUTCOMES}
    return CalibrationReport(binned=binned, fits=fits, alphas=derive_alphas(fits))
