"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines.
Synthetic fixtures are pinned by seed; tolerances are stated inline.
"""

import time
from contextlib import contextmanager

import pytest

from oddsgate.backtest import (
    BacktestReport,
    expected_accuracy,
    run_closing_backtest,
    run_timeseries_backtest,
    simulate_staleness,
)
from oddsgate.bootstrap import BootstrapConfig, run_bootstrap
from oddsgate.calibration import bin_consensus, calibrate, fit_regression
from oddsgate.core import (
    ConsensusEstimate,
    Outcome,
    StrategyConfig,
    SyntheticMarketSpec,
    bet_profit,
    should_bet,
)
from oddsgate.data import generate_synthetic
from oddsgate.scanner import replay_equivalence


@contextmanager
def criterion(cid: str, title: str):
    detail: dict = {}
    try:
        yield detail
    except BaseException:
        print(f"[{cid}] FAIL — {title}")
        raise
    extra = f": {detail['note']}" if "note" in detail else ""
    print(f"[{cid}] PASS — {title}{extra}")


# Shared market for criteria 5, 7, 8 and the strategy side of 10:
# 50,000 games, 5% overround, one-in-twenty quotes inflated by 8%.
STRATEGY_SPEC = SyntheticMarketSpec(
    p_real=(0.45, 0.26, 0.29),
    concentration=6.0,
    overround=0.05,
    dispersion=0.03,
    mispricing_rate=0.05,
    mispricing_factor=1.08,
    n_bookmakers=12,
    seed=512,
)


@pytest.fixture(scope="module")
def strategy_market():
    return generate_synthetic(STRATEGY_SPEC, 50_000)


@pytest.fixture(scope="module")
def strategy_report(strategy_market):
    return run_closing_backtest(strategy_market)


def estimate(p_cons: float, max_odds: float) -> ConsensusEstimate:
    return ConsensusEstimate(
        game_id="grid",
        outcome=Outcome.HOME_WIN,
        p_cons=p_cons,
        n_quotes=3,
        mean_odds=1.0 / p_cons,
        median_odds=1.0 / p_cons,
        max_odds=max_odds,
        max_bookmaker="b",
    )


def test_c01_gate_ev_oracle():
    with criterion("C01", "gate agrees with the expected-payoff sign on the full grid") as d:
        config = StrategyConfig(alpha=0.05)
        checked = 0
        start = time.perf_counter()
        for i in range(6, 96):
            p = i / 100.0
            for j in range(101, 1001):
                w = j / 100.0
                gate = should_bet(estimate(p, w), config).qualifies
                oracle = (p - 0.05) * w - 1.0 > 0.0
                assert gate == oracle, f"disagreement at p={p}, w={w}"
                checked += 1
        elapsed = time.perf_counter() - start
        assert checked == 90 * 900
        assert elapsed < 1.0, f"grid took {elapsed:.2f}s"
        d["note"] = f"{checked} points exact in {elapsed:.2f}s"


def test_c02_settlement_rows():
    with criterion("C02", "settlement arithmetic reproduces the ledger rows exactly") as d:
        rows = [(1.78, True, 39.0), (1.60, False, -50.0), (1.14, True, 7.0), (2.40, False, -50.0)]
        for odds, won, expected in rows:
            assert bet_profit(50.0, odds, won) == expected
        d["note"] = "4 rows, zero tolerance"


def test_c03_metric_identity():
    with criterion("C03", "report return matches the published totals") as d:
        def report_with(profit, n_bets, stake):
            return BacktestReport(
                n_bets=n_bets,
                n_wins=0,
                total_profit=profit,
                total_staked=n_bets * stake,
                mean_odds=0.0,
                std_odds=0.0,
                expected_accuracy=0.0,
                bankroll_curve=(),
                config={},
                bets=(),
            )

        closing = report_with(98_865, 56_435, 50).return_on_stake * 100
        assert abs(closing - 3.50) < 0.05, closing
        stream = report_with(34_932, 6_994, 50).return_on_stake * 100
        assert abs(stream - 9.9) < 0.1, stream
        d["note"] = f"3.50% -> {closing:.3f}%, 9.9% -> {stream:.3f}%"


def test_c04_calibration_recovery():
    with criterion("C04", "regression recovers the planted 0.034 offset at 200k games") as d:
        start = time.perf_counter()
        spec = SyntheticMarketSpec(
            p_real=(0.45, 0.26, 0.29),
            concentration=6.0,
            overround=3 * 0.034,  # split over three outcomes: +0.034 per consensus
            dispersion=0.01,
            n_bookmakers=8,
            seed=401,
        )
        dataset = generate_synthetic(spec, 200_000)
        fit = fit_regression(bin_consensus(dataset, Outcome.HOME_WIN))
        elapsed = time.perf_counter() - start
        assert 0.98 <= fit.slope <= 1.02, fit
        assert abs(fit.intercept + 0.034) <= 0.006, fit
        assert fit.r_squared >= 0.99, fit
        assert elapsed < 60.0, f"took {elapsed:.1f}s"
        d["note"] = (
            f"slope={fit.slope:.4f} intercept={fit.intercept:.4f} "
            f"R2={fit.r_squared:.4f} in {elapsed:.1f}s"
        )


def test_c05_strategy_beats_bootstrap(strategy_market, strategy_report):
    with criterion("C05", "strategy return >= 3 sigma above the random-bet bootstrap") as d:
        start = time.perf_counter()
        dist = run_bootstrap(
            strategy_market,
            BootstrapConfig(
                sample_size=strategy_report.n_bets,
                n_reps=2000,
                outcome_priors=(0.595, 0.021, 0.384),
                stake=50.0,
                seed=513,
            ),
            strategy_return=strategy_report.return_on_stake,
        )
        elapsed = time.perf_counter() - start
        assert strategy_report.return_on_stake > 0
        assert dist.z_score >= 3.0, dist.z_score
        assert elapsed < 180.0, f"bootstrap took {elapsed:.1f}s"
        d["note"] = (
            f"return={strategy_report.return_on_stake:.2%} over {strategy_report.n_bets} bets, "
            f"z={dist.z_score:.2f}, bootstrap mean={dist.mean:.2%}"
        )


def test_c06_bootstrap_loses_the_margin():
    with criterion("C06", "random betting on a fair 5%-overround market returns -5% +/- 1pp") as d:
        spec = SyntheticMarketSpec(
            p_real=(0.45, 0.26, 0.29),
            concentration=12.0,
            overround=0.05,
            dispersion=0.0,
            n_bookmakers=8,
            seed=601,
        )
        dataset = generate_synthetic(spec, 20_000)
        dist = run_bootstrap(dataset, BootstrapConfig(sample_size=4_000, n_reps=2000, seed=602))
        assert abs(dist.mean - (-0.05)) <= 0.01, dist.mean
        d["note"] = f"mean return {dist.mean:.2%}"


def test_c07_staleness_robustness(strategy_market, strategy_report):
    with criterion("C07", "dropping 30% of bets moves mean return <= 1pp") as d:
        result = simulate_staleness(
            strategy_market, StrategyConfig(), drop_rate=0.30, n_seeds=20, seed=514
        )
        drift = abs(result.mean_return - result.baseline_return)
        assert drift <= 0.01, drift
        assert result.baseline_return == strategy_report.return_on_stake
        d["note"] = f"baseline {result.baseline_return:.2%}, mean {result.mean_return:.2%} over 20 seeds"


def test_c08_expected_accuracy_estimator(strategy_market, strategy_report):
    with criterion("C08", "realized accuracy within 2 binomial sd of the estimator") as d:
        assert strategy_report.n_bets >= 5_000
        alphas = calibrate(strategy_market).alphas
        est = expected_accuracy(list(strategy_report.bets), alphas)
        sd = (est * (1 - est) / strategy_report.n_bets) ** 0.5
        diff = abs(strategy_report.accuracy - est)
        assert diff <= 2 * sd, f"diff {diff:.4f} vs 2sd {2 * sd:.4f}"
        d["note"] = (
            f"realized {strategy_report.accuracy:.1%} vs estimated {est:.1%} "
            f"({strategy_report.n_bets} bets, 2sd={2 * sd:.2%})"
        )


def test_c09_scanner_backtester_equivalence():
    with criterion("C09", "scanner auto-placement equals the backtester on 10 fixtures") as d:
        total_bets = 0
        fixtures_with_bets = 0
        for seed in range(9000, 9010):
            spec = SyntheticMarketSpec(
                p_real=(0.45, 0.26, 0.29),
                concentration=6.0,
                overround=0.05,
                dispersion=0.03,
                mispricing_rate=0.05,
                mispricing_factor=1.08,
                n_bookmakers=6,
                seed=seed,
            )
            dataset = generate_synthetic(spec, 250, with_quotes=True)
            report = replay_equivalence(dataset)
            assert report.equivalent, f"seed {seed}: {report.to_dict()}"
            total_bets += len(report.backtest_bets)
            fixtures_with_bets += bool(report.backtest_bets)
        assert fixtures_with_bets >= 5, "fixtures too quiet to be meaningful"
        d["note"] = f"zero diffs, {total_bets} bets across {fixtures_with_bets} active fixtures"


def test_c10_determinism():
    with criterion("C10", "fixed seeds give bit-identical runs") as d:
        spec = SyntheticMarketSpec(
            concentration=6.0,
            overround=0.05,
            dispersion=0.03,
            mispricing_rate=0.05,
            mispricing_factor=1.08,
            n_bookmakers=8,
            seed=77,
        )
        a = generate_synthetic(spec, 1_000, with_quotes=True)
        b = generate_synthetic(spec, 1_000, with_quotes=True)
        assert a.games == b.games and a.quotes == b.quotes

        closing_a = run_closing_backtest(a)
        closing_b = run_closing_backtest(b)
        assert closing_a.bets == closing_b.bets
        assert closing_a.to_dict() == closing_b.to_dict()

        stream_a = run_timeseries_backtest(a)
        stream_b = run_timeseries_backtest(b)
        assert stream_a.bets == stream_b.bets

        config = BootstrapConfig(sample_size=500, n_reps=200, seed=42)
        boot_a = run_bootstrap(a, config, closing_a.return_on_stake)
        boot_b = run_bootstrap(b, config, closing_b.return_on_stake)
        assert boot_a.returns == boot_b.returns
        assert boot_a.to_dict() == boot_b.to_dict()

        stale_a = simulate_staleness(a, StrategyConfig(), 0.3, n_seeds=5, seed=7)
        stale_b = simulate_staleness(b, StrategyConfig(), 0.3, n_seeds=5, seed=7)
        assert stale_a.returns == stale_b.returns
        d["note"] = "generator, both backtests, bootstrap and staleness all bit-identical"
