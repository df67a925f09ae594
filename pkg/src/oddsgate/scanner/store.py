"""SQLite-backed persistence for recommendations and the bet ledger.

A single-file embedded store in WAL mode: placements and settlements are
durable across restarts, and a partial unique index guarantees at most one
placed recommendation per game for the lifetime of the database.
"""

from __future__ import annotations

import sqlite3
from datetime import datetime
from pathlib import Path

from ..core import Outcome
from ..data import format_timestamp, parse_timestamp
from ..errors import UnknownEntity
from .models import BetMode, LedgerEntry, RecStatus, Recommendation, Settlement

_SCHEMA = """
CREATE TABLE IF NOT EXISTS recommendations (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    game_id TEXT NOT NULL,
    league TEXT NOT NULL,
    home_team TEXT NOT NULL,
    away_team TEXT NOT NULL,
    outcome TEXT NOT NULL,
    best_odds REAL NOT NULL,
    best_bookmaker TEXT NOT NULL,
    mean_odds REAL NOT NULL,
    median_odds REAL NOT NULL,
    p_cons REAL NOT NULL,
    threshold REAL NOT NULL,
    kickoff TEXT NOT NULL,
    created_at TEXT NOT NULL,
    updated_at TEXT NOT NULL,
    status TEXT NOT NULL
);
CREATE UNIQUE INDEX IF NOT EXISTS one_placed_per_game
    ON recommendations (game_id) WHERE status = 'placed';
CREATE INDEX IF NOT EXISTS rec_status ON recommendations (status);
CREATE UNIQUE INDEX IF NOT EXISTS one_pending_per_market
    ON recommendations (game_id, outcome) WHERE status = 'pending';

CREATE TABLE IF NOT EXISTS ledger (
    id INTEGER PRIMARY KEY AUTOINCREMENT,
    recommendation_id INTEGER NOT NULL REFERENCES recommendations (id),
    game_id TEXT NOT NULL,
    match_title TEXT NOT NULL,
    league TEXT NOT NULL,
    outcome TEXT NOT NULL,
    placed_at TEXT NOT NULL,
    mode TEXT NOT NULL,
    requested_stake REAL NOT NULL,
    accepted_stake REAL NOT NULL,
    odds_at_placement REAL NOT NULL,
    bookmaker TEXT NOT NULL,
    settlement TEXT NOT NULL,
    profit REAL NOT NULL,
    limit_event TEXT,
    settled_at TEXT
);
"""


class ScannerStore:
    """Thin row mapper over the embedded database.

    Not thread-safe by itself; the engine serializes all access behind its
    command lock.
    """

    def __init__(self, path: str | Path = ":memory:"):
        self.path = str(path)
        self._conn = sqlite3.connect(self.path, check_same_thread=False)
        self._conn.row_factory = sqlite3.Row
        if self.path != ":memory:":
            self._conn.execute("PRAGMA journal_mode=WAL")
            self._conn.execute("PRAGMA synchronous=NORMAL")
        self._conn.executescript(_SCHEMA)
        self._conn.commit()

    def close(self) -> None:
        self._conn.close()

    # -- recommendations ----------------------------------------------------

    def insert_recommendation(self, rec: Recommendation) -> Recommendation:
        cur = self._conn.execute(
            """INSERT INTO recommendations
               (game_id, league, home_team, away_team, outcome, best_odds, best_bookmaker,
                mean_odds, median_odds, p_cons, threshold, kickoff, created_at, updated_at, status)
               VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?)""",
            (
                rec.game_id,
                rec.league,
                rec.home_team,
                rec.away_team,
                rec.outcome.code,
                rec.best_odds,
                rec.best_bookmaker,
                rec.mean_odds,
                rec.median_odds,
                rec.p_cons,
                rec.threshold,
                format_timestamp(rec.kickoff),
                format_timestamp(rec.created_at),
                format_timestamp(rec.updated_at),
                rec.status.value,
            ),
        )
        self._conn.commit()
        return self.recommendation(cur.lastrowid)

    def update_recommendation(self, rec: Recommendation) -> None:
        self._conn.execute(
            """UPDATE recommendations SET best_odds=?, best_bookmaker=?, mean_odds=?,
               median_odds=?, p_cons=?, threshold=?, updated_at=?, status=? WHERE id=?""",
            (
                rec.best_odds,
                rec.best_bookmaker,
                rec.mean_odds,
                rec.median_odds,
                rec.p_cons,
                rec.threshold,
                format_timestamp(rec.updated_at),
                rec.status.value,
                rec.id,
            ),
        )
        self._conn.commit()

    def recommendation(self, rec_id: int) -> Recommendation:
        row = self._conn.execute("SELECT * FROM recommendations WHERE id=?", (rec_id,)).fetchone()
        if row is None:
            raise UnknownEntity(f"recommendation {rec_id} does not exist")
        return _rec_from_row(row)

    def recommendations(self, status: RecStatus | None = None) -> list[Recommendation]:
        if status is None:
            rows = self._conn.execute("SELECT * FROM recommendations ORDER BY kickoff, id").fetchall()
        else:
            rows = self._conn.execute(
                "SELECT * FROM recommendations WHERE status=? ORDER BY kickoff, id",
                (status.value,),
            ).fetchall()
        return [_rec_from_row(r) for r in rows]

    def pending_for_game(self, game_id: str) -> list[Recommendation]:
        rows = self._conn.execute(
            "SELECT * FROM recommendations WHERE game_id=? AND status='pending' ORDER BY id",
            (game_id,),
        ).fetchall()
        return [_rec_from_row(r) for r in rows]

    def pending_for(self, game_id: str, outcome: Outcome) -> Recommendation | None:
        row = self._conn.execute(
            "SELECT * FROM recommendations WHERE game_id=? AND outcome=? AND status='pending'",
            (game_id, outcome.code),
        ).fetchone()
        return None if row is None else _rec_from_row(row)

    def pending_recommendations(self) -> list[Recommendation]:
        return self.recommendations(RecStatus.PENDING)

    def placed_game_ids(self) -> set[str]:
        rows = self._conn.execute("SELECT DISTINCT game_id FROM ledger").fetchall()
        return {r["game_id"] for r in rows}

    # -- ledger --------------------------------------------------------------

    def insert_entry(self, entry: LedgerEntry) -> LedgerEntry:
        cur = self._conn.execute(
            """INSERT INTO ledger
               (recommendation_id, game_id, match_title, league, outcome, placed_at, mode,
                requested_stake, accepted_stake, odds_at_placement, bookmaker, settlement,
                profit, limit_event, settled_at)
               VALUES (?,?,?,?,?,?,?,?,?,?,?,?,?,?,?)""",
            (
                entry.recommendation_id,
                entry.game_id,
                entry.match_title,
                entry.league,
                entry.outcome.code,
                format_timestamp(entry.placed_at),
                entry.mode.value,
                entry.requested_stake,
                entry.accepted_stake,
                entry.odds_at_placement,
                entry.bookmaker,
                entry.settlement.value,
                entry.profit,
                entry.limit_event,
                format_timestamp(entry.settled_at) if entry.settled_at else None,
            ),
        )
        self._conn.commit()
        return self.entry(cur.lastrowid)

    def update_entry(self, entry: LedgerEntry) -> None:
        self._conn.execute(
            "UPDATE ledger SET settlement=?, profit=?, settled_at=? WHERE id=?",
            (
                entry.settlement.value,
                entry.profit,
                format_timestamp(entry.settled_at) if entry.settled_at else None,
                entry.id,
            ),
        )
        self._conn.commit()

    def entry(self, entry_id: int) -> LedgerEntry:
        row = self._conn.execute("SELECT * FROM ledger WHERE id=?", (entry_id,)).fetchone()
        if row is None:
            raise UnknownEntity(f"ledger entry {entry_id} does not exist")
        return _entry_from_row(row)

    def entries(
        self,
        placed_from: datetime | None = None,
        placed_to: datetime | None = None,
    ) -> list[LedgerEntry]:
        query = "SELECT * FROM ledger"
        clauses, params = [], []
        if placed_from is not None:
            clauses.append("placed_at >= ?")
            params.append(format_timestamp(placed_from))
        if placed_to is not None:
            clauses.append("placed_at <= ?")
            params.append(format_timestamp(placed_to))
        if clauses:
            query += " WHERE " + " AND ".join(clauses)
        query += " ORDER BY placed_at DESC, id DESC"
        return [_entry_from_row(r) for r in self._conn.execute(query, params).fetchall()]


def _rec_from_row(row: sqlite3.Row) -> Recommendation:
    return Recommendation(
        id=row["id"],
        game_id=row["game_id"],
        league=row["league"],
        home_team=row["home_team"],
        away_team=row["away_team"],
        outcome=Outcome.from_code(row["outcome"]),
        best_odds=row["best_odds"],
        best_bookmaker=row["best_bookmaker"],
        mean_odds=row["mean_odds"],
        median_odds=row["median_odds"],
        p_cons=row["p_cons"],
        threshold=row["threshold"],
        kickoff=parse_timestamp(row["kickoff"]),
        created_at=parse_timestamp(row["created_at"]),
        updated_at=parse_timestamp(row["updated_at"]),
        status=RecStatus(row["status"]),
    )


def _entry_from_row(row: sqlite3.Row) -> LedgerEntry:
    return LedgerEntry(
        id=row["id"],
        recommendation_id=row["recommendation_id"],
        game_id=row["game_id"],
        match_title=row["match_title"],
        league=row["league"],
        outcome=Outcome.from_code(row["outcome"]),
        placed_at=parse_timestamp(row["placed_at"]),
        mode=BetMode(row["mode"]),
        requested_stake=row["requested_stake"],
        accepted_stake=row["accepted_stake"],
        odds_at_placement=row["odds_at_placement"],
        bookmaker=row["bookmaker"],
        settlement=Settlement(row["settlement"]),
        profit=row["profit"],
        limit_event=row["limit_event"],
        settled_at=parse_timestamp(row["settled_at"]) if row["settled_at"] else None,
    )
