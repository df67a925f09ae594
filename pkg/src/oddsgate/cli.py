"""Command-line interface.

Subcommands cover the full workflow: generate synthetic markets, calibrate
consensus probabilities, backtest on closing odds or quote streams, sweep the
alpha margin, stress staleness, benchmark against the random-bet bootstrap,
cross-check scanner vs backtester, and serve the live scanner API.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from datetime import timedelta
from pathlib import Path

from . import __version__
from .backtest import run_closing_backtest, run_timeseries_backtest, simulate_staleness, sweep_alpha
from .bootstrap import BootstrapConfig, run_bootstrap
from .calibration import calibrate
from .core import OUTCOMES, StrategyConfig, SyntheticMarketSpec
from .data import (
    DEFAULT_ANCHOR,
    generate_synthetic,
    parse_closing_odds,
    parse_quote_stream,
    parse_timestamp,
    write_closing_odds,
    write_quote_stream,
)
from .scanner import ScannerRuntime, load_settings, replay_equivalence


def _strategy_config(args: argparse.Namespace) -> StrategyConfig:
    return StrategyConfig(
        alpha=args.alpha,
        stake=args.stake,
        min_quotes=args.min_quotes,
        window_open=timedelta(hours=args.window_open),
        window_close=timedelta(hours=args.window_close),
    )


def _add_strategy_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--alpha", type=float, default=0.05, help="probability margin (default 0.05)")
    p.add_argument("--stake", type=float, default=50.0, help="stake per bet (default 50)")
    p.add_argument("--min-quotes", type=int, default=3, dest="min_quotes")
    p.add_argument("--window-open", type=float, default=5.0, dest="window_open", help="hours before kickoff")
    p.add_argument("--window-close", type=float, default=1.0, dest="window_close", help="hours before kickoff")


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
        print(f"wrote {out}")
    else:
        print(text)


def cmd_generate(args: argparse.Namespace) -> int:
    base = tuple(float(x) for x in args.base_probs.split(","))
    spec = SyntheticMarketSpec(
        p_real=base,
        concentration=args.concentration,
        overround=args.overround,
        dispersion=args.dispersion,
        mispricing_rate=args.mispricing_rate,
        mispricing_factor=args.mispricing_factor,
        n_bookmakers=args.bookmakers,
        seed=args.seed,
    )
    anchor = parse_timestamp(args.anchor) if args.anchor else DEFAULT_ANCHOR
    dataset = generate_synthetic(spec, args.games, with_quotes=bool(args.stream), anchor=anchor)
    if args.closing:
        write_closing_odds(dataset, args.closing)
        print(f"wrote {args.closing} ({len(dataset.games)} games)")
    if args.stream:
        write_quote_stream(dataset, args.stream)
        print(f"wrote {args.stream} ({len(dataset.games)} games, {len(dataset.quotes)} quotes)")
    if not args.closing and not args.stream:
        print("nothing to do: pass --closing and/or --stream", file=sys.stderr)
        return 2
    return 0


def cmd_calibrate(args: argparse.Namespace) -> int:
    dataset = parse_closing_odds(args.data)
    report = calibrate(dataset, args.bin_width, args.min_bin_count, args.min_quotes)
    _emit(report.to_dict(), args.out)
    if args.table:
        with open(args.table, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["outcome", "lower", "upper", "mean_p_cons", "empirical_rate", "n_games", "included"])
            for outcome in OUTCOMES:
                binned = report.binned[outcome]
                for b in binned.bins:
                    writer.writerow([outcome.code, b.lower, b.upper, b.mean_p_cons, b.empirical_rate, b.n_games, 1])
                for b in binned.excluded:
                    writer.writerow([outcome.code, b.lower, b.upper, b.mean_p_cons, b.empirical_rate, b.n_games, 0])
        print(f"wrote {args.table}")
    return 0


def _write_curve(report, path: str) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bet_index", "game_id", "placed_at", "outcome", "odds", "profit", "cumulative_profit"])
        for i, (bet, cum) in enumerate(zip(report.bets, report.bankroll_curve), 1):
            placed = bet.placed_at if isinstance(bet.placed_at, str) else bet.placed_at.isoformat()
            writer.writerow([i, bet.game_id, placed, bet.outcome.code, bet.odds, bet.profit, cum])
    print(f"wrote {path}")


def cmd_backtest_closing(args: argparse.Namespace) -> int:
    dataset = parse_closing_odds(args.data)
    report = run_closing_backtest(dataset, _strategy_config(args))
    _emit(report.to_dict(), args.out)
    if args.curve:
        _write_curve(report, args.curve)
    return 0


def cmd_backtest_stream(args: argparse.Namespace) -> int:
    dataset = parse_quote_stream(args.data)
    report = run_timeseries_backtest(dataset, _strategy_config(args))
    _emit(report.to_dict(), args.out)
    if args.curve:
        _write_curve(report, args.curve)
    return 0


def cmd_sweep_alpha(args: argparse.Namespace) -> int:
    dataset = parse_quote_stream(args.data) if args.mode == "stream" else parse_closing_odds(args.data)
    alphas = [float(a) for a in args.alphas.split(",")]
    rows = sweep_alpha(dataset, _strategy_config(args), alphas, mode=args.mode)
    _emit(
        {
            "rows": [
                {
                    "alpha": r.alpha,
                    "n_bets": r.n_bets,
                    "return_on_stake": r.return_on_stake,
                    "total_profit": r.total_profit,
                    "accuracy": r.accuracy,
                }
                for r in rows
            ]
        },
        args.out,
    )
    return 0


def cmd_staleness(args: argparse.Namespace) -> int:
    dataset = parse_quote_stream(args.data) if args.mode == "stream" else parse_closing_odds(args.data)
    result = simulate_staleness(
        dataset,
        _strategy_config(args),
        drop_rate=args.drop_rate,
        n_seeds=args.seeds,
        seed=args.seed,
        mode=args.mode,
    )
    _emit(result.to_dict(), args.out)
    return 0


def cmd_bootstrap(args: argparse.Namespace) -> int:
    dataset = parse_closing_odds(args.data)
    strategy_return = args.strategy_return
    sample_size = args.sample_size
    if args.strategy_report:
        strategy = json.loads(Path(args.strategy_report).read_text())
        sample_size = sample_size or strategy["n_bets"]
        strategy_return = strategy_return if strategy_return is not None else strategy["return_on_stake"]
    if not sample_size:
        print("need --sample-size or --strategy-report", file=sys.stderr)
        return 2
    priors = tuple(float(x) for x in args.priors.split(","))
    config = BootstrapConfig(
        sample_size=sample_size,
        n_reps=args.reps,
        outcome_priors=priors,
        stake=args.stake,
        seed=args.seed,
    )
    dist = run_bootstrap(dataset, config, strategy_return)
    _emit(dist.to_dict(), args.out)
    if args.hist:
        with open(args.hist, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["rep", "return"])
            for i, r in enumerate(dist.returns):
                writer.writerow([i, r])
        print(f"wrote {args.hist}")
    return 0


def cmd_replay_check(args: argparse.Namespace) -> int:
    dataset = parse_quote_stream(args.data)
    report = replay_equivalence(dataset, _strategy_config(args))
    _emit(report.to_dict(), args.out)
    return 0 if report.equivalent else 1


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    settings = load_settings(args.config)
    if args.feed:
        settings.feed = args.feed
    if args.db:
        settings.db = args.db
    if args.host:
        settings.host = args.host
    if args.port:
        settings.port = args.port
    if args.speedup is not None:
        settings.speedup = args.speedup
    runtime = ScannerRuntime(settings)
    runtime.start()
    try:
        uvicorn.run(runtime.app, host=settings.host, port=settings.port, log_level="info")
    finally:
        runtime.stop()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oddsgate", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a synthetic market")
    p.add_argument("--games", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--overround", type=float, default=0.05)
    p.add_argument("--dispersion", type=float, default=0.02)
    p.add_argument("--mispricing-rate", type=float, default=0.0, dest="mispricing_rate")
    p.add_argument("--mispricing-factor", type=float, default=1.0, dest="mispricing_factor")
    p.add_argument("--bookmakers", type=int, default=8)
    p.add_argument("--concentration", type=float, default=12.0)
    p.add_argument("--base-probs", default="0.45,0.26,0.29", dest="base_probs")
    p.add_argument("--anchor", default=None, help="kickoff of the first game, ISO-8601 UTC")
    p.add_argument("--closing", default=None, help="write closing-odds CSV here")
    p.add_argument("--stream", default=None, help="write quote-stream JSONL here")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("calibrate", help="bin consensus probabilities and fit the regression")
    p.add_argument("--data", required=True, help="closing-odds CSV")
    p.add_argument("--bin-width", type=float, default=0.0125, dest="bin_width")
    p.add_argument("--min-bin-count", type=int, default=100, dest="min_bin_count")
    p.add_argument("--min-quotes", type=int, default=3, dest="min_quotes")
    p.add_argument("--out", default=None)
    p.add_argument("--table", default=None, help="plot-ready bins CSV")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("backtest-closing", help="run the strategy on closing odds")
    p.add_argument("--data", required=True)
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--curve", default=None, help="cumulative-profit CSV")
    p.set_defaults(func=cmd_backtest_closing)

    p = sub.add_parser("backtest-stream", help="replay a quote stream through the strategy")
    p.add_argument("--data", required=True)
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--curve", default=None)
    p.set_defaults(func=cmd_backtest_stream)

    p = sub.add_parser("sweep-alpha", help="backtest across an alpha grid")
    p.add_argument("--data", required=True)
    p.add_argument("--alphas", default="0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.10")
    p.add_argument("--mode", choices=["closing", "stream"], default="closing")
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep_alpha)

    p = sub.add_parser("staleness", help="drop a fraction of bets at random, repeatedly")
    p.add_argument("--data", required=True)
    p.add_argument("--drop-rate", type=float, default=0.30, dest="drop_rate")
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=["closing", "stream"], default="closing")
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_staleness)

    p = sub.add_parser("bootstrap", help="random-bet baseline distribution")
    p.add_argument("--data", required=True, help="closing-odds CSV")
    p.add_argument("--reps", type=int, default=2000)
    p.add_argument("--sample-size", type=int, default=None, dest="sample_size")
    p.add_argument("--strategy-report", default=None, dest="strategy_report", help="backtest JSON to score")
    p.add_argument("--strategy-return", type=float, default=None, dest="strategy_return")
    p.add_argument("--priors", default="0.595,0.021,0.384")
    p.add_argument("--stake", type=float, default=50.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--hist", default=None, help="per-rep returns CSV")
    p.set_defaults(func=cmd_bootstrap)

    p = sub.add_parser("replay-check", help="verify scanner/backtester equivalence on a stream")
    p.add_argument("--data", required=True)
    _add_strategy_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_replay_check)

    p = sub.add_parser("serve", help="run the live scanner API")
    p.add_argument("--config", default=None, help="settings JSON")
    p.add_argument("--feed", default=None)
    p.add_argument("--db", default=None)
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--speedup", type=float, default=None)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
