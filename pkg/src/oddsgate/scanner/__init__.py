"""Live scanner: feed ingestion, recommendations, ledger and HTTP API."""

from .config import ScannerSettings, load_settings
from .engine import ScannerEngine
from .models import BetMode, LedgerEntry, LedgerStats, RecStatus, Recommendation, Settlement
from .replay import EquivalenceReport, replay_equivalence
from .runtime import ScannerRuntime
from .service import FeedState, create_app
from .store import ScannerStore

__all__ = [
    "BetMode",
    "EquivalenceReport",
    "FeedState",
    "LedgerEntry",
    "LedgerStats",
    "RecStatus",
    "Recommendation",
    "ScannerEngine",
    "ScannerRuntime",
    "ScannerSettings",
    "ScannerStore",
    "Settlement",
    "create_app",
    "load_settings",
    "replay_equivalence",
]
