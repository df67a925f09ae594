"""Exception types shared across the package."""


class OddsGateError(Exception):
    """Base class for all package errors."""

    code = "error"


class InsufficientQuotes(OddsGateError):
    """Fewer bookmaker quotes than the configured minimum."""

    code = "insufficient_quotes"


class DegenerateProbability(OddsGateError):
    """Probability outside the open interval (0, 1)."""

    code = "degenerate_probability"


class MarginUnderflow(OddsGateError):
    """Consensus probability does not exceed the margin; threshold undefined."""

    code = "margin_underflow"


class IncompleteMarket(OddsGateError):
    """A three-way market is missing odds for at least one outcome."""

    code = "incomplete_market"


class SchemaError(OddsGateError):
    """Input file does not conform to the documented schema."""

    code = "schema_error"


class EmptyDataset(OddsGateError):
    """No usable rows survived parsing."""

    code = "empty_dataset"


class NoEligibleGames(OddsGateError):
    """Dataset contains no games usable for the requested analysis."""

    code = "no_eligible_games"


class InsufficientBins(OddsGateError):
    """Fewer than two populated calibration bins; regression undefined."""

    code = "insufficient_bins"


class AlreadyPlaced(OddsGateError):
    """A bet has already been placed for this game or recommendation."""

    code = "already_placed"


class RecommendationExpired(OddsGateError):
    """The recommendation's betting window has closed."""

    code = "recommendation_expired"


class InvalidStake(OddsGateError):
    """Stake amounts must be positive and accepted <= requested."""

    code = "invalid_stake"


class AlreadySettled(OddsGateError):
    """The ledger entry was already settled with a different result."""

    code = "already_settled"


class UnknownEntity(OddsGateError):
    """Referenced recommendation or ledger entry does not exist."""

    code = "unknown_entity"
