"""Probability algebra and the betting gate."""

import numpy as np
import pytest

from conftest import estimate, odds_set, quote
from oddsgate.core import (
    Outcome,
    OddsSet,
    StrategyConfig,
    adjusted_probability,
    bet_profit,
    bet_threshold,
    consensus_probability,
    expected_payoff,
    fair_odds,
    overround,
    should_bet,
)
from oddsgate.errors import (
    DegenerateProbability,
    IncompleteMarket,
    InsufficientQuotes,
    MarginUnderflow,
)


class TestConsensus:
    def test_identical_odds(self):
        est = consensus_probability(odds_set([2.0, 2.0, 2.0]))
        assert est.p_cons == 0.5
        assert est.n_quotes == 3

    def test_hand_computed_mean(self):
        est = consensus_probability(odds_set([1.5, 2.0, 2.5]))
        assert est.mean_odds == 2.0
        assert est.p_cons == 0.5
        assert est.median_odds == 2.0
        assert est.max_odds == 2.5

    def test_heavy_favourite_market(self):
        values = [1.35, 1.36, 1.38, 1.40, 1.42, 1.44, 1.45, 1.57]
        est = consensus_probability(odds_set(values))
        assert est.p_cons == pytest.approx(len(values) / sum(values))
        assert est.max_odds == 1.57
        assert est.median_odds == pytest.approx(1.41)

    def test_insufficient_quotes(self):
        with pytest.raises(InsufficientQuotes):
            consensus_probability(odds_set([1.5, 2.0]), min_quotes=3)

    def test_permutation_invariant(self):
        values = [1.91, 2.34, 1.77, 2.05, 1.99]
        a = consensus_probability(odds_set(values))
        b = consensus_probability(odds_set(list(reversed(values))))
        assert a.p_cons == b.p_cons
        assert a.max_bookmaker != b.max_bookmaker  # labels move with position, value does not

    def test_strictly_decreasing_in_any_quote(self):
        base = [1.8, 2.0, 2.2]
        p0 = consensus_probability(odds_set(base)).p_cons
        for i in range(3):
            bumped = list(base)
            bumped[i] += 0.1
            assert consensus_probability(odds_set(bumped)).p_cons < p0

    def test_max_odds_tie_breaks_lexicographically(self):
        quotes = (
            quote("zeta", 2.5),
            quote("alpha", 2.5),
            quote("mid", 2.0),
        )
        est = consensus_probability(OddsSet("g1", Outcome.HOME_WIN, quotes))
        assert est.max_bookmaker == "alpha"

    def test_latest_quote_wins_per_bookmaker(self):
        from datetime import timedelta

        from conftest import TS

        early = quote("b1", 2.0, at=TS)
        late = quote("b1", 2.4, at=TS + timedelta(minutes=5))
        s = OddsSet.from_quotes("g1", Outcome.HOME_WIN, [early, late, quote("b2", 2.0), quote("b3", 2.0)])
        est = consensus_probability(s)
        assert est.max_odds == 2.4


class TestFairOdds:
    def test_even_chance(self):
        assert fair_odds(0.5) == 2.0

    def test_roulette_red(self):
        assert fair_odds(18 / 38) == pytest.approx(2.111, abs=5e-4)

    def test_continuous_toward_one(self):
        assert fair_odds(1 - 1e-12) == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5])
    def test_degenerate(self, p):
        with pytest.raises(DegenerateProbability):
            fair_odds(p)

    def test_involution(self):
        for w in np.linspace(1.001, 50.0, 997):
            assert fair_odds(1.0 / w) == pytest.approx(w, rel=1e-12)


class TestExpectedPayoff:
    def test_fair_bet_is_zero(self):
        assert expected_payoff(0.5, 2.0) == 0.0

    def test_roulette_house_edge(self):
        assert expected_payoff(18 / 38, 2.0) == pytest.approx(-2 / 38)

    def test_hand_computed(self):
        assert expected_payoff(0.5, 2.2) == pytest.approx(0.10)

    def test_zero_at_fair_odds_everywhere(self):
        for p in np.linspace(0.01, 0.99, 197):
            assert expected_payoff(p, fair_odds(p)) == pytest.approx(0.0, abs=1e-15)


class TestAdjustedProbability:
    def test_direct_subtraction(self):
        assert adjusted_probability(0.5, 0.05) == 0.45

    def test_dashboard_value(self):
        assert adjusted_probability(0.691, 0.05) == pytest.approx(0.641)

    def test_underflow(self):
        with pytest.raises(MarginUnderflow):
            adjusted_probability(0.04, 0.05)
        with pytest.raises(MarginUnderflow):
            adjusted_probability(0.05, 0.05)


class TestBetThreshold:
    def test_hand_computed(self):
        assert bet_threshold(0.5, 0.05) == pytest.approx(1 / 0.45)

    def test_dashboard_row(self):
        # mean odds 1.44722222 -> threshold just below the best offer of 1.57
        p = 1.0 / 1.44722222
        assert bet_threshold(p, 0.05) == pytest.approx(1.5601, abs=5e-4)
        assert 1.57 > bet_threshold(p, 0.05)

    def test_alpha_cancels_in_limit_form(self):
        alpha = 0.05
        for p in (0.3, 0.6, 0.9):
            assert bet_threshold(alpha + p, alpha) == pytest.approx(1.0 / p)

    def test_monotone_in_alpha_and_p(self):
        assert bet_threshold(0.6, 0.06) > bet_threshold(0.6, 0.05)
        assert bet_threshold(0.5, 0.05) > bet_threshold(0.6, 0.05)


class TestGate:
    def test_dashboard_row_one_qualifies(self):
        d = should_bet(estimate(1.0 / 1.44722222, 1.57), StrategyConfig())
        assert d.qualifies
        assert d.odds == 1.57
        assert d.bookmaker == "book00"

    def test_dashboard_row_two_qualifies(self):
        d = should_bet(estimate(1.0 / 3.46529411, 4.20), StrategyConfig())
        assert d.qualifies
        assert d.threshold == pytest.approx(4.1915, abs=5e-4)

    def test_below_threshold(self):
        d = should_bet(estimate(0.48, 2.32), StrategyConfig())
        assert not d.qualifies
        assert d.reason == "below_threshold"
        assert d.threshold == pytest.approx(2.3256, abs=5e-4)

    def test_margin_underflow_is_no_qualify(self):
        d = should_bet(estimate(0.04, 30.0), StrategyConfig())
        assert not d.qualifies
        assert d.reason == "margin_underflow"
        assert d.threshold is None

    def test_tie_at_threshold_does_not_qualify(self):
        # (p - alpha) * odds == 1 exactly: zero expected edge is not enough
        d = should_bet(estimate(0.55, 2.0), StrategyConfig())
        assert (0.55 - 0.05) * 2.0 == 1.0
        assert not d.qualifies

    def test_gate_ev_equivalence_on_grid(self):
        config = StrategyConfig()
        for i in range(6, 96):
            p = i / 100.0
            for j in (101, 150, 199, 222, 223, 500, 999):
                w = j / 100.0
                d = should_bet(estimate(p, w), config)
                assert d.qualifies == (expected_payoff(p - 0.05, w) > 0.0)

    def test_raising_alpha_never_unlocks(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            p = rng.uniform(0.1, 0.95)
            w = rng.uniform(1.01, 8.0)
            lo = should_bet(estimate(p, w), StrategyConfig(alpha=0.03))
            hi = should_bet(estimate(p, w), StrategyConfig(alpha=0.07))
            if hi.qualifies:
                assert lo.qualifies


class TestOverround:
    def test_symmetric_three_way(self):
        assert overround(2.0, 2.0, 2.0) == pytest.approx(0.5)

    def test_fair_three_way(self):
        assert overround(3.0, 3.0, 3.0) == pytest.approx(0.0)

    def test_roulette_analogue(self):
        # two-way market paying 2.0 each with true coverage 36/38: the two-outcome
        # margin 2/38 matches the house take per unit staked
        margin = (1 / 2.0 + 1 / 2.0) - 36 / 38
        assert margin == pytest.approx(2 / 38)

    def test_incomplete_market(self):
        with pytest.raises(IncompleteMarket):
            overround(2.0, None, 3.0)


class TestSettlement:
    @pytest.mark.parametrize(
        "odds,won,expected",
        [
            (1.78, True, 39.0),
            (1.60, False, -50.0),
            (1.14, True, 7.0),
            (2.40, False, -50.0),
            (1.29, True, 14.5),
        ],
    )
    def test_ledger_rows(self, odds, won, expected):
        assert bet_profit(50.0, odds, won) == expected


class TestConfig:
    def test_defaults(self):
        c = StrategyConfig()
        assert c.alpha == 0.05
        assert c.stake == 50.0
        assert c.min_quotes == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha": 0.0},
            {"alpha": 1.0},
            {"stake": 0.0},
            {"min_quotes": 1},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            StrategyConfig(**kwargs)

    def test_rejects_inverted_window(self):
        from datetime import timedelta

        with pytest.raises(ValueError):
            StrategyConfig(window_open=timedelta(hours=1), window_close=timedelta(hours=5))
