"""Wires feed thread, expiry sweeper and API app into a running scanner."""

from __future__ import annotations

import logging
import threading

from ..data import ReplayFeed, parse_quote_stream
from .config import ScannerSettings
from .engine import ScannerEngine
from .service import FeedState, create_app
from .store import ScannerStore

logger = logging.getLogger(__name__)


class ScannerRuntime:
    """Owns the engine plus its background threads for one deployment."""

    def __init__(self, settings: ScannerSettings):
        self.settings = settings
        self.store = ScannerStore(settings.db)
        self.engine = ScannerEngine(self.store, settings.strategy_config())
        self.feed_state = FeedState(settings.silence_window_s)
        self.app = create_app(self.engine, self.feed_state, settings.ui_dir or None)
        self._stop = threading.Event()
        self._threads: list[threading.Thread] = []

    def start(self) -> None:
        if self.settings.feed:
            dataset = parse_quote_stream(self.settings.feed)
            self.engine.register_games(dataset.games.values())
            feed = ReplayFeed(dataset, self.settings.speedup)
            t = threading.Thread(target=self._pump, args=(feed,), name="feed", daemon=True)
            t.start()
            self._threads.append(t)
        sweeper = threading.Thread(target=self._sweep_loop, name="sweeper", daemon=True)
        sweeper.start()
        self._threads.append(sweeper)

    def stop(self) -> None:
        self._stop.set()

    def _pump(self, feed: ReplayFeed) -> None:
        # Events flow through the engine's batching ingest so simultaneous
        # quotes are evaluated together, exactly as the backtester would.
        def tracked():
            for event in feed.events():
                if self._stop.is_set():
                    return
                self.feed_state.mark_event()
                yield event

        try:
            self.engine.ingest(tracked())
        except Exception:
            logger.exception("feed thread crashed")
        finally:
            self.feed_state.mark_finished()
            logger.info("feed finished after %d events", self.feed_state.events_seen)

    def _sweep_loop(self) -> None:
        while not self._stop.wait(self.settings.sweep_interval_s):
            try:
                self.engine.scan_tick()
            except Exception:
                logger.exception("expiry sweep failed")
