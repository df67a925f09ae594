"""Shared fixtures and small builders for the test suite."""

from datetime import datetime, timedelta, timezone

import pytest

from oddsgate.core import ConsensusEstimate, OddsQuote, OddsSet, Outcome

TS = datetime(2025, 3, 1, 12, 0, tzinfo=timezone.utc)


def quote(bookmaker: str, odds: float, outcome: Outcome = Outcome.HOME_WIN, at: datetime = TS) -> OddsQuote:
    return OddsQuote(bookmaker_id=bookmaker, outcome=outcome, odds=odds, observed_at=at)


def odds_set(values, outcome: Outcome = Outcome.HOME_WIN, game_id: str = "g1") -> OddsSet:
    quotes = tuple(quote(f"book{i:02d}", w, outcome) for i, w in enumerate(values))
    return OddsSet(game_id=game_id, outcome=outcome, quotes=quotes)


def estimate(p_cons: float, max_odds: float, outcome: Outcome = Outcome.HOME_WIN) -> ConsensusEstimate:
    """Hand-built estimate for gate tests; mean odds kept consistent with p_cons."""
    return ConsensusEstimate(
        game_id="g1",
        outcome=outcome,
        p_cons=p_cons,
        n_quotes=3,
        mean_odds=1.0 / p_cons,
        median_odds=1.0 / p_cons,
        max_odds=max_odds,
        max_bookmaker="book00",
    )


@pytest.fixture
def now():
    return TS


def hours(h: float) -> timedelta:
    return timedelta(hours=h)
