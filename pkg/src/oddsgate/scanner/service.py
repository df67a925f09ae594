"""HTTP/JSON API over the scanner engine.

Endpoints
---------
GET  /recommendations?status=pending   current recommendations, soonest kickoff first
POST /bets                             place a bet against a recommendation
POST /bets/{id}/settle                 record won/lost/void (idempotent on retries)
GET  /ledger?from=&to=                 ledger entries, newest first
GET  /stats                            totals bar numbers
GET  /health                           feed liveness

Errors carry a machine-readable reason: {"error": {"code": ..., "message": ...}}.
"""

from __future__ import annotations

import logging
import threading
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..data import parse_timestamp
from ..errors import (
    AlreadyPlaced,
    AlreadySettled,
    InvalidStake,
    OddsGateError,
    RecommendationExpired,
    UnknownEntity,
)
from .engine import ScannerEngine
from .models import BetMode, RecStatus, Settlement

logger = logging.getLogger(__name__)

_STATUS_CODES = {
    AlreadyPlaced: 409,
    AlreadySettled: 409,
    RecommendationExpired: 410,
    InvalidStake: 422,
    UnknownEntity: 404,
}


class FeedState:
    """Liveness of the quote feed, updated by the feed thread."""

    def __init__(self, silence_window_s: float = 300.0):
        self.silence_window_s = silence_window_s
        self.last_event_at: datetime | None = None
        self.events_seen = 0
        self.finished = False
        self._lock = threading.Lock()

    def mark_event(self) -> None:
        with self._lock:
            self.last_event_at = datetime.now(timezone.utc)
            self.events_seen += 1

    def mark_finished(self) -> None:
        with self._lock:
            self.finished = True

    def snapshot(self) -> dict:
        with self._lock:
            now = datetime.now(timezone.utc)
            if self.finished:
                status = "finished"
            elif self.last_event_at is None:
                status = "waiting"
            elif (now - self.last_event_at).total_seconds() > self.silence_window_s:
                status = "stalled"
            else:
                status = "live"
            return {
                "status": status,
                "events_seen": self.events_seen,
                "last_event_at": self.last_event_at.isoformat() if self.last_event_at else None,
            }


class PlaceBetRequest(BaseModel):
    recommendation_id: int
    mode: BetMode = BetMode.PAPER
    requested_stake: float = Field(gt=0)
    accepted_stake: float | None = Field(default=None, gt=0)
    note: str | None = None


class SettleRequest(BaseModel):
    result: Settlement


def create_app(engine: ScannerEngine, feed_state: FeedState | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="oddsgate scanner", docs_url=None, redoc_url=None)
    feed_state = feed_state or FeedState()

    @app.exception_handler(OddsGateError)
    async def _domain_error(request: Request, exc: OddsGateError) -> JSONResponse:
        status = _STATUS_CODES.get(type(exc), 400)
        logger.info("rejected %s %s: %s (%s)", request.method, request.url.path, exc, exc.code)
        return JSONResponse(
            status_code=status,
            content={"error": {"code": exc.code, "message": str(exc)}},
        )

    @app.get("/recommendations")
    def recommendations(status: str | None = "pending") -> dict:
        engine.scan_tick()
        rec_status = RecStatus(status) if status else None
        now = datetime.now(timezone.utc)
        recs = engine.recommendations(rec_status)
        return {"recommendations": [r.to_dict(now) for r in recs]}

    @app.post("/bets", status_code=201)
    def place_bet(body: PlaceBetRequest) -> dict:
        entry = engine.place_bet(
            body.recommendation_id,
            body.mode,
            body.requested_stake,
            body.accepted_stake,
            body.note,
        )
        return entry.to_dict()

    @app.post("/bets/{entry_id}/settle")
    def settle_bet(entry_id: int, body: SettleRequest) -> dict:
        entry, stats = engine.settle_bet(entry_id, body.result)
        return {"entry": entry.to_dict(), "stats": stats.to_dict()}

    @app.get("/ledger")
    def ledger(
        placed_from: str | None = Query(default=None, alias="from"),
        placed_to: str | None = Query(default=None, alias="to"),
    ) -> dict:
        lo = parse_timestamp(placed_from) if placed_from else None
        hi = parse_timestamp(placed_to) if placed_to else None
        return {"entries": [e.to_dict() for e in engine.ledger(lo, hi)]}

    @app.get("/stats")
    def stats() -> dict:
        return engine.stats().to_dict()

    @app.get("/health")
    def health() -> dict:
        snap = feed_state.snapshot()
        snap["clock"] = engine.clock.isoformat() if engine.clock else None
        snap["placed_games"] = len(engine.placed_games)
        return snap

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
