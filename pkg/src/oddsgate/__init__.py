"""oddsgate: consensus-odds value betting toolkit.

Detects mispriced 1X2 odds by comparing each bookmaker's best offer against
the market consensus probability, backtests the strategy on closing odds and
quote streams, benchmarks it against a random-bet bootstrap, and runs a live
scanner with a paper-trading ledger behind an HTTP API.
"""

from .core import (
    OUTCOMES,
    BetDecision,
    ConsensusEstimate,
    OddsQuote,
    OddsSet,
    Outcome,
    StrategyConfig,
    SyntheticMarketSpec,
    adjusted_probability,
    bet_profit,
    bet_threshold,
    consensus_probability,
    expected_payoff,
    fair_odds,
    overround,
    should_bet,
)
from .data import (
    Dataset,
    GameRecord,
    QuoteEvent,
    ReplayFeed,
    generate_synthetic,
    parse_closing_odds,
    parse_quote_stream,
    write_closing_odds,
    write_quote_stream,
)

__version__ = "0.1.0"
