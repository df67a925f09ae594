"""Consensus probability, fair odds, expected payoff and the value-bet gate.

All odds are decimal (European) odds: total payout per unit staked, so the
profit per unit is ``odds - 1``. Everything here is a pure function over
immutable values; instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum

from .errors import (
    DegenerateProbability,
    IncompleteMarket,
    InsufficientQuotes,
    MarginUnderflow,
)

DEFAULT_ALPHA = 0.05
DEFAULT_STAKE = 50.0
DEFAULT_MIN_QUOTES = 3


class Outcome(Enum):
    """The three results of a 1X2 market."""

    HOME_WIN = "1"
    DRAW = "X"
    AWAY_WIN = "2"

    @property
    def code(self) -> str:
        return self.value

    @classmethod
    def from_code(cls, code: str) -> "Outcome":
        try:
            return cls(code)
        except ValueError:
            raise ValueError(f"unknown outcome code {code!r}, expected 1/X/2") from None

    @property
    def index(self) -> int:
        return _OUTCOME_ORDER.index(self)


# Evaluation and tie-break order used everywhere a choice between outcomes
# has to be deterministic.
_OUTCOME_ORDER = (Outcome.HOME_WIN, Outcome.DRAW, Outcome.AWAY_WIN)
OUTCOMES = _OUTCOME_ORDER


@dataclass(frozen=True, slots=True)
class OddsQuote:
    """One bookmaker's decimal odds for one outcome of one game."""

    bookmaker_id: str
    outcome: Outcome
    odds: float
    observed_at: datetime

    def __post_init__(self) -> None:
        if not self.odds > 1.0:
            raise ValueError(f"decimal odds must exceed 1.0, got {self.odds}")


@dataclass(frozen=True, slots=True)
class OddsSet:
    """The set of quotes offered across bookmakers for one (game, outcome)."""

    game_id: str
    outcome: Outcome
    quotes: tuple[OddsQuote, ...]

    def __post_init__(self) -> None:
        seen = set()
        for q in self.quotes:
            if q.outcome is not self.outcome:
                raise ValueError(f"quote outcome {q.outcome} does not match set outcome {self.outcome}")
            if q.bookmaker_id in seen:
                raise ValueError(f"duplicate bookmaker {q.bookmaker_id!r} in odds set")
            seen.add(q.bookmaker_id)

    @classmethod
    def from_quotes(cls, game_id: str, outcome: Outcome, quotes) -> "OddsSet":
        """Build a set keeping only each bookmaker's latest quote."""
        latest: dict[str, OddsQuote] = {}
        for q in quotes:
            prev = latest.get(q.bookmaker_id)
            if prev is None or q.observed_at >= prev.observed_at:
                latest[q.bookmaker_id] = q
        return cls(game_id, outcome, tuple(latest.values()))


@dataclass(frozen=True, slots=True)
class ConsensusEstimate:
    """Market consensus for one (game, outcome): p_cons = 1 / mean(odds)."""

    game_id: str
    outcome: Outcome
    p_cons: float
    n_quotes: int
    mean_odds: float
    median_odds: float
    max_odds: float
    max_bookmaker: str

    def __post_init__(self) -> None:
        if not 0.0 < self.p_cons < 1.0:
            raise ValueError(f"consensus probability must be in (0, 1), got {self.p_cons}")


@dataclass(frozen=True, slots=True)
class StrategyConfig:
    """Parameters of the betting strategy.

    alpha is the probability margin subtracted from the consensus before the
    gate test; the betting window is [kickoff - window_open,
    kickoff - window_close].
    """

    alpha: float = DEFAULT_ALPHA
    stake: float = DEFAULT_STAKE
    min_quotes: int = DEFAULT_MIN_QUOTES
    window_open: timedelta = timedelta(hours=5)
    window_close: timedelta = timedelta(hours=1)

    def __post_init__(self) -> None:
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must be in (0, 1)")
        if self.stake <= 0:
            raise ValueError("stake must be positive")
        if self.min_quotes < 2:
            raise ValueError("min_quotes must be at least 2")
        if not self.window_open > self.window_close >= timedelta(0):
            raise ValueError("window_open must exceed window_close, which must be non-negative")


@dataclass(frozen=True)
class SyntheticMarketSpec:
    """Parameters of the synthetic odds generator.

    p_real gives the mean outcome probabilities (home, draw, away) of the
    Dirichlet prior games are drawn from; concentration scales its strength.
    Each bookmaker quotes odds = 1 / ((p_real + overround/3) * noise) with
    lognormal noise of scale `dispersion`, and every quote is independently
    inflated by `mispricing_factor` with probability `mispricing_rate`, so
    the rate is the expected fraction of mispriced quotes.
    """

    p_real: tuple[float, float, float] = (0.45, 0.26, 0.29)
    concentration: float = 12.0
    overround: float = 0.05
    dispersion: float = 0.0
    mispricing_rate: float = 0.0
    mispricing_factor: float = 1.0
    n_bookmakers: int = 8
    seed: int = 0

    def __post_init__(self) -> None:
        if abs(sum(self.p_real) - 1.0) > 1e-9:
            raise ValueError("p_real must sum to 1")
        if self.overround < 0:
            raise ValueError("overround must be non-negative")
        if self.mispricing_factor < 1.0:
            raise ValueError("mispricing_factor must be >= 1")
        if not 0.0 <= self.mispricing_rate <= 1.0:
            raise ValueError("mispricing_rate must be in [0, 1]")
        if self.n_bookmakers < 1:
            raise ValueError("need at least one bookmaker")


@dataclass(frozen=True, slots=True)
class BetDecision:
    """Outcome of the gate test for one consensus estimate."""

    qualifies: bool
    estimate: ConsensusEstimate
    alpha: float
    threshold: float | None
    reason: str
    odds: float | None = None
    bookmaker: str | None = None

    @property
    def expected_edge(self) -> float | None:
        """Modeled expected payoff per unit stake, (p_cons - alpha) * odds - 1."""
        if self.odds is None:
            return None
        return (self.estimate.p_cons - self.alpha) * self.odds - 1.0


def _median(sorted_values: list[float]) -> float:
    n = len(sorted_values)
    mid = n // 2
    if n % 2:
        return sorted_values[mid]
    return (sorted_values[mid - 1] + sorted_values[mid]) / 2.0


def estimate_from_values(
    game_id: str,
    outcome: Outcome,
    odds_by_bookmaker: dict[str, float],
    min_quotes: int = DEFAULT_MIN_QUOTES,
) -> ConsensusEstimate:
    """Consensus estimate straight from a bookmaker -> odds mapping.

    This is the arithmetic core behind consensus_probability; batch callers
    (backtests, calibration) use it to skip building quote objects.
    """
    n = len(odds_by_bookmaker)
    if n < min_quotes:
        raise InsufficientQuotes(
            f"{game_id}/{outcome.code}: {n} quotes, need at least {min_quotes}"
        )
    values = sorted(odds_by_bookmaker.values())
    mean_odds = sum(values) / n
    max_odds = values[-1]
    # Deterministic tie-break: lexicographically smallest bookmaker at max odds.
    max_bookmaker = min(b for b, w in odds_by_bookmaker.items() if w == max_odds)
    return ConsensusEstimate(
        game_id=game_id,
        outcome=outcome,
        p_cons=1.0 / mean_odds,
        n_quotes=n,
        mean_odds=mean_odds,
        median_odds=_median(values),
        max_odds=max_odds,
        max_bookmaker=max_bookmaker,
    )


def consensus_probability(odds_set: OddsSet, min_quotes: int = DEFAULT_MIN_QUOTES) -> ConsensusEstimate:
    """Consensus probability of an outcome: the inverse of the mean odds.

    Records quote count, mean/median/max odds and the bookmaker offering the
    maximum. Raises InsufficientQuotes below the configured minimum.
    """
    odds_by_bookmaker = {q.bookmaker_id: q.odds for q in odds_set.quotes}
    return estimate_from_values(odds_set.game_id, odds_set.outcome, odds_by_bookmaker, min_quotes)


def fair_odds(p: float) -> float:
    """Odds at which a bet on an event of probability p has zero expected payoff."""
    if not 0.0 < p < 1.0:
        raise DegenerateProbability(f"probability must be in (0, 1), got {p}")
    return 1.0 / p


def expected_payoff(p_real: float, omega: float) -> float:
    """Expected payoff per unit staked at odds omega: p_real * omega - 1."""
    if not 0.0 <= p_real <= 1.0:
        raise DegenerateProbability(f"probability must be in [0, 1], got {p_real}")
    if not omega > 1.0:
        raise ValueError(f"decimal odds must exceed 1.0, got {omega}")
    return p_real * omega - 1.0


def adjusted_probability(p_cons: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Consensus probability corrected down by the margin alpha."""
    if p_cons <= alpha:
        raise MarginUnderflow(f"p_cons {p_cons} does not exceed alpha {alpha}")
    return p_cons - alpha


def bet_threshold(p_cons: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Minimum odds worth betting: 1 / (p_cons - alpha).

    Odds strictly above this imply a positive expected payoff under the
    adjusted probability.
    """
    return 1.0 / adjusted_probability(p_cons, alpha)


def should_bet(estimate: ConsensusEstimate, config: StrategyConfig) -> BetDecision:
    """The value-bet gate: qualify iff the best offered odds clear the threshold.

    The comparison is evaluated in product form,
    (p_cons - alpha) * max_odds > 1, which is the same predicate as
    max_odds > 1 / (p_cons - alpha) and bit-for-bit identical to the
    expected-payoff sign test it is derived from.
    """
    alpha = config.alpha
    if estimate.p_cons <= alpha:
        return BetDecision(
            qualifies=False,
            estimate=estimate,
            alpha=alpha,
            threshold=None,
            reason="margin_underflow",
        )
    threshold = 1.0 / (estimate.p_cons - alpha)
    if (estimate.p_cons - alpha) * estimate.max_odds - 1.0 > 0.0:
        return BetDecision(
            qualifies=True,
            estimate=estimate,
            alpha=alpha,
            threshold=threshold,
            reason="qualified",
            odds=estimate.max_odds,
            bookmaker=estimate.max_bookmaker,
        )
    return BetDecision(
        qualifies=False,
        estimate=estimate,
        alpha=alpha,
        threshold=threshold,
        reason="below_threshold",
        odds=estimate.max_odds,
        bookmaker=estimate.max_bookmaker,
    )


def overround(odds_home: float, odds_draw: float, odds_away: float) -> float:
    """Bookmaker margin of a three-way market: sum of implied probabilities minus 1."""
    odds = (odds_home, odds_draw, odds_away)
    if any(w is None for w in odds):
        raise IncompleteMarket("all three outcomes need odds")
    for w in odds:
        if not w > 1.0:
            raise ValueError(f"decimal odds must exceed 1.0, got {w}")
    return sum(1.0 / w for w in odds) - 1.0


def bet_profit(stake: float, odds: float, won: bool) -> float:
    """Settled profit of a fixed-stake bet, rounded to cents.

    A win pays stake * (odds - 1); a loss forfeits the stake.
    """
    if won:
        return round(stake * (odds - 1.0), 2)
    return -stake
