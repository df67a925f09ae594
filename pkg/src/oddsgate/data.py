"""Odds datasets: closing-odds CSV, quote-stream JSONL, synthetic markets.

File schemas
------------
Closing odds (CSV, one row per game/bookmaker pair)::

    game_id,league,home,away,kickoff_utc,result,bookmaker,odds_home,odds_draw,odds_away

``result`` is ``1``/``X``/``2`` or empty for unsettled games; odds cells may
be empty where a bookmaker did not price an outcome.

Quote stream (JSONL, append-only)::

    {"type": "game", "game_id": ..., "league": ..., "home": ..., "away": ...,
     "kickoff_utc": ..., "result": ...}
    {"ts": ..., "game_id": ..., "bookmaker": ..., "outcome": "1|X|2", "odds": ...}

Game lines may appear anywhere; quote lines referencing an unknown game are
collected as orphans and dropped. Timestamps are ISO-8601 UTC.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .core import OUTCOMES, Outcome, SyntheticMarketSpec
from .errors import EmptyDataset, SchemaError

CLOSING_COLUMNS = [
    "game_id",
    "league",
    "home",
    "away",
    "kickoff_utc",
    "result",
    "bookmaker",
    "odds_home",
    "odds_draw",
    "odds_away",
]


def parse_timestamp(value: str) -> datetime:
    """ISO-8601 string to an aware UTC datetime; naive input is taken as UTC."""
    dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if dt.tzinfo is None:
        return dt.replace(tzinfo=timezone.utc)
    return dt.astimezone(timezone.utc)


def format_timestamp(dt: datetime) -> str:
    """Canonical fixed-width UTC form; lexicographic order == time order."""
    return dt.astimezone(timezone.utc).isoformat(timespec="microseconds").replace("+00:00", "Z")


@dataclass(frozen=True, slots=True)
class QuoteEvent:
    """A timestamped odds observation from one bookmaker."""

    observed_at: datetime
    game_id: str
    bookmaker_id: str
    outcome: Outcome
    odds: float

    def __post_init__(self) -> None:
        if not self.odds > 1.0:
            raise ValueError(f"decimal odds must exceed 1.0, got {self.odds}")


@dataclass(slots=True)
class GameRecord:
    """A game with sparse per-bookmaker closing odds and its settled result."""

    game_id: str
    league: str
    home_team: str
    away_team: str
    kickoff: datetime
    result: Outcome | None
    # bookmaker -> (home, draw, away) decimal odds, None where unquoted
    odds: dict[str, tuple[float | None, float | None, float | None]] = field(default_factory=dict)

    @property
    def settled(self) -> bool:
        return self.result is not None

    def outcome_odds(self, outcome: Outcome) -> dict[str, float]:
        """Bookmaker -> odds for one outcome, skipping missing quotes."""
        i = outcome.index
        return {b: o[i] for b, o in self.odds.items() if o[i] is not None}


@dataclass(frozen=True, slots=True)
class Provenance:
    source: str
    checksum: str | None = None


@dataclass(slots=True)
class ParseReport:
    rows_read: int = 0
    rows_dropped: int = 0
    orphan_quotes: int = 0
    drop_reasons: dict[str, int] = field(default_factory=dict)

    def drop(self, reason: str) -> None:
        self.rows_dropped += 1
        self.drop_reasons[reason] = self.drop_reasons.get(reason, 0) + 1


@dataclass
class Dataset:
    """Immutable-by-convention bundle of games plus an optional quote series."""

    games: dict[str, GameRecord]
    quotes: tuple[QuoteEvent, ...] = ()
    provenance: Provenance = Provenance("in-memory")
    parse_report: ParseReport | None = None

    def __post_init__(self) -> None:
        for q in self.quotes:
            if q.game_id not in self.games:
                raise ValueError(f"orphan quote for unknown game {q.game_id!r}")
        for a, b in zip(self.quotes, self.quotes[1:]):
            if b.observed_at < a.observed_at:
                raise ValueError("quotes must be sorted by observed_at")

    @property
    def has_quotes(self) -> bool:
        return bool(self.quotes)

    def settled_games(self) -> list[GameRecord]:
        return [g for g in self.games.values() if g.settled]


def _file_checksum(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _parse_odds_cell(value: str | None) -> float | None:
    if value is None or value.strip() == "":
        return None
    return float(value)


def parse_closing_odds(path: str | Path) -> Dataset:
    """Load a closing-odds CSV into a Dataset.

    Rows with malformed or sub-1.0 odds are dropped and counted in the parse
    report; later rows win when a (game, bookmaker) pair repeats.
    """
    path = Path(path)
    report = ParseReport()
    games: dict[str, GameRecord] = {}
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file")
        missing = [c for c in CLOSING_COLUMNS if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}")
        for row in reader:
            report.rows_read += 1
            try:
                odds = tuple(_parse_odds_cell(row[f"odds_{k}"]) for k in ("home", "draw", "away"))
            except ValueError:
                report.drop("unparseable_odds")
                continue
            if any(w is not None and w <= 1.0 for w in odds):
                report.drop("odds_not_above_one")
                continue
            try:
                kickoff = parse_timestamp(row["kickoff_utc"])
            except ValueError:
                report.drop("bad_kickoff")
                continue
            result_code = (row["result"] or "").strip()
            try:
                result = Outcome.from_code(result_code) if result_code else None
            except ValueError:
                report.drop("bad_result")
                continue
            game = games.get(row["game_id"])
            if game is None:
                game = GameRecord(
                    game_id=row["game_id"],
                    league=row["league"],
                    home_team=row["home"],
                    away_team=row["away"],
                    kickoff=kickoff,
                    result=result,
                )
                games[row["game_id"]] = game
            game.odds[row["bookmaker"]] = odds  # latest row wins
    if not games:
        raise EmptyDataset(f"{path}: no valid games")
    return Dataset(
        games=games,
        provenance=Provenance(str(path), _file_checksum(path)),
        parse_report=report,
    )


def write_closing_odds(dataset: Dataset, path: str | Path) -> None:
    """Serialize closing odds in the canonical CSV layout (round-trip safe)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CLOSING_COLUMNS)
        for game in dataset.games.values():
            for bookmaker, odds in game.odds.items():
                writer.writerow(
                    [
                        game.game_id,
                        game.league,
                        game.home_team,
                        game.away_team,
                        format_timestamp(game.kickoff),
                        game.result.code if game.result else "",
                        bookmaker,
                        *["" if w is None else repr(w) for w in odds],
                    ]
                )


def _game_from_json(rec: dict) -> GameRecord:
    result_code = (rec.get("result") or "").strip()
    return GameRecord(
        game_id=str(rec["game_id"]),
        league=rec.get("league", ""),
        home_team=rec.get("home", ""),
        away_team=rec.get("away", ""),
        kickoff=parse_timestamp(rec["kickoff_utc"]),
        result=Outcome.from_code(result_code) if result_code else None,
    )


def parse_quote_stream(path: str | Path) -> Dataset:
    """Load a quote-stream JSONL file.

    Events are stably sorted by timestamp; duplicate (game, bookmaker,
    outcome, timestamp) keys keep the last occurrence; orphan quotes are
    counted and dropped. Each game's closing odds are filled with the final
    pre-kickoff quote per bookmaker and outcome.
    """
    path = Path(path)
    report = ParseReport()
    games: dict[str, GameRecord] = {}
    raw_events: list[QuoteEvent] = []
    with path.open() as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            report.rows_read += 1
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(f"{path}:{lineno}: invalid JSON ({exc})") from None
            if rec.get("type") == "game" or "kickoff_utc" in rec:
                try:
                    game = _game_from_json(rec)
                except (KeyError, ValueError):
                    report.drop("bad_game_record")
                    continue
                games[game.game_id] = game
                continue
            try:
                event = QuoteEvent(
                    observed_at=parse_timestamp(rec["ts"]),
                    game_id=str(rec["game_id"]),
                    bookmaker_id=str(rec["bookmaker"]),
                    outcome=Outcome.from_code(rec["outcome"]),
                    odds=float(rec["odds"]),
                )
            except (KeyError, ValueError, TypeError):
                report.drop("bad_quote_record")
                continue
            raw_events.append(event)

    # Last occurrence wins per (game, bookmaker, outcome, timestamp).
    deduped: dict[tuple, QuoteEvent] = {}
    for ev in raw_events:
        deduped[(ev.game_id, ev.bookmaker_id, ev.outcome, ev.observed_at)] = ev
    events = []
    for ev in deduped.values():
        if ev.game_id not in games:
            report.orphan_quotes += 1
            continue
        events.append(ev)
    events.sort(key=lambda e: e.observed_at)

    if not games:
        raise EmptyDataset(f"{path}: no game records")

    _fill_closing_from_quotes(games, events)
    return Dataset(
        games=games,
        quotes=tuple(events),
        provenance=Provenance(str(path), _file_checksum(path)),
        parse_report=report,
    )


def _fill_closing_from_quotes(games: dict[str, GameRecord], events: list[QuoteEvent]) -> None:
    """Each bookmaker's final pre-kickoff quote becomes the closing odds."""
    for ev in events:
        game = games[ev.game_id]
        if ev.observed_at > game.kickoff:
            continue
        current = list(game.odds.get(ev.bookmaker_id, (None, None, None)))
        current[ev.outcome.index] = ev.odds
        game.odds[ev.bookmaker_id] = tuple(current)


def write_quote_stream(dataset: Dataset, path: str | Path) -> None:
    """Serialize games plus the time-ordered event series as JSONL."""
    path = Path(path)
    with path.open("w") as fh:
        for game in dataset.games.values():
            fh.write(
                json.dumps(
                    {
                        "type": "game",
                        "game_id": game.game_id,
                        "league": game.league,
                        "home": game.home_team,
                        "away": game.away_team,
                        "kickoff_utc": format_timestamp(game.kickoff),
                        "result": game.result.code if game.result else "",
                    }
                )
                + "\n"
            )
        for ev in dataset.quotes:
            fh.write(
                json.dumps(
                    {
                        "ts": format_timestamp(ev.observed_at),
                        "game_id": ev.game_id,
                        "bookmaker": ev.bookmaker_id,
                        "outcome": ev.outcome.code,
                        "odds": ev.odds,
                    }
                )
                + "\n"
            )


DEFAULT_ANCHOR = datetime(2025, 1, 1, 12, 0, tzinfo=timezone.utc)


def generate_synthetic(
    spec: SyntheticMarketSpec,
    n_games: int,
    with_quotes: bool = False,
    anchor: datetime = DEFAULT_ANCHOR,
) -> Dataset:
    """Generate a fully determined synthetic market.

    For each game a true probability vector is drawn from a Dirichlet prior
    with mean spec.p_real; every bookmaker prices each outcome at
    1 / ((p_real + overround/3) * noise), individual quotes are inflated by
    the mispricing factor with probability mispricing_rate, and the result is
    sampled from the true probabilities. With ``with_quotes`` the dataset
    also carries a pre-kickoff event series whose final quote per bookmaker
    equals the closing odds.
    """
    rng = np.random.default_rng(spec.seed)
    nb = spec.n_bookmakers
    alpha = np.asarray(spec.p_real) * spec.concentration
    p_real = rng.dirichlet(alpha, size=n_games)  # (n, 3)

    share = spec.overround / 3.0
    base = p_real[:, :, None] + share  # (n, 3, 1)
    if spec.dispersion > 0:
        implied = base * np.exp(spec.dispersion * rng.standard_normal((n_games, 3, nb)))
    else:
        implied = np.repeat(base, nb, axis=2)
    implied = np.clip(implied, 1e-4, 0.999)
    odds = 1.0 / implied
    if spec.mispricing_rate > 0:
        inflate = rng.random((n_games, 3, nb)) < spec.mispricing_rate
        odds = np.where(inflate, odds * spec.mispricing_factor, odds)

    draws = rng.random(n_games)
    results = (draws[:, None] > np.cumsum(p_real, axis=1)).sum(axis=1)  # 0/1/2

    bookmakers = [f"book{j:02d}" for j in range(nb)]
    games: dict[str, GameRecord] = {}
    width = len(str(max(n_games - 1, 1)))
    odds_rows = odds.tolist()  # python floats; keeps numpy scalars out of records
    results_list = results.tolist()
    for i in range(n_games):
        gid = f"SYN{i:0{width}d}"
        row = odds_rows[i]
        games[gid] = GameRecord(
            game_id=gid,
            league="synthetic",
            home_team=f"Home {i}",
            away_team=f"Away {i}",
            kickoff=anchor + timedelta(minutes=17 * i),
            result=OUTCOMES[results_list[i]],
            odds={bookmakers[j]: (row[0][j], row[1][j], row[2][j]) for j in range(nb)},
        )

    quotes: tuple[QuoteEvent, ...] = ()
    if with_quotes:
        quotes = _synthesize_quote_series(rng, games, odds, bookmakers)

    return Dataset(
        games=games,
        quotes=quotes,
        provenance=Provenance(f"synthetic(seed={spec.seed}, n={n_games})"),
    )


def _synthesize_quote_series(
    rng: np.random.Generator,
    games: dict[str, GameRecord],
    odds: np.ndarray,
    bookmakers: list[str],
) -> tuple[QuoteEvent, ...]:
    """Pre-kickoff odds movements converging to the closing values.

    Per (game, bookmaker, outcome): an early quote ~6h out, one or two moves
    inside the betting window, and a final quote shortly before kickoff that
    equals the closing odds exactly.
    """
    n_games = len(games)
    nb = len(bookmakers)
    events: list[QuoteEvent] = []
    game_list = list(games.values())
    jitter = rng.exponential(0.02, size=(n_games, 3, nb, 3))
    early_min = rng.uniform(330, 390, size=(n_games, nb))
    win_min = rng.uniform(60, 300, size=(n_games, 3, nb, 2))
    final_min = rng.uniform(10, 50, size=(n_games, nb))
    n_moves = rng.integers(1, 3, size=(n_games, 3, nb))
    for i, game in enumerate(game_list):
        for j, bookmaker in enumerate(bookmakers):
            for k in range(3):
                closing = odds[i, k, j]
                outcome = OUTCOMES[k]
                events.append(
                    QuoteEvent(
                        observed_at=game.kickoff - timedelta(minutes=float(early_min[i, j])),
                        game_id=game.game_id,
                        bookmaker_id=bookmaker,
                        outcome=outcome,
                        odds=float(closing * (1.0 + jitter[i, k, j, 0])),
                    )
                )
                for m in range(int(n_moves[i, k, j])):
                    events.append(
                        QuoteEvent(
                            observed_at=game.kickoff - timedelta(minutes=float(win_min[i, k, j, m])),
                            game_id=game.game_id,
                            bookmaker_id=bookmaker,
                            outcome=outcome,
                            odds=float(closing * (1.0 + jitter[i, k, j, 1 + m])),
                        )
                    )
                events.append(
                    QuoteEvent(
                        observed_at=game.kickoff - timedelta(minutes=float(final_min[i, j])),
                        game_id=game.game_id,
                        bookmaker_id=bookmaker,
                        outcome=outcome,
                        odds=float(closing),
                    )
                )
    events.sort(key=lambda e: e.observed_at)
    return tuple(events)


def iter_event_batches(
    events: Iterable[QuoteEvent],
) -> Iterator[tuple[datetime, str, list[QuoteEvent]]]:
    """Group a time-sorted event stream into (timestamp, game) batches.

    All events sharing one timestamp are split per game in encounter order;
    simultaneous quotes for one game are therefore evaluated together. Both
    the backtester and the scanner consume batches produced here so their
    notion of "the same event" is identical.
    """
    pending: list[QuoteEvent] = []
    for ev in events:
        if pending and ev.observed_at != pending[0].observed_at:
            yield from _split_by_game(pending)
            pending = []
        pending.append(ev)
    if pending:
        yield from _split_by_game(pending)


def _split_by_game(slice_events: list[QuoteEvent]) -> Iterator[tuple[datetime, str, list[QuoteEvent]]]:
    by_game: dict[str, list[QuoteEvent]] = {}
    for ev in slice_events:
        by_game.setdefault(ev.game_id, []).append(ev)
    for gid, evs in by_game.items():
        yield evs[0].observed_at, gid, evs


class ReplayFeed:
    """Feed adapter replaying a dataset's quote series.

    speedup scales replay pace relative to recorded time; 0 (the default)
    replays as fast as possible. Timestamps are delivered unchanged, so the
    consumer's clock should follow event time.
    """

    def __init__(self, dataset: Dataset, speedup: float = 0.0, sleep: Callable[[float], None] = time.sleep):
        if not dataset.has_quotes:
            raise ValueError("dataset has no quote series to replay")
        self._dataset = dataset
        self._speedup = speedup
        self._sleep = sleep

    def events(self) -> Iterator[QuoteEvent]:
        previous = None
        for ev in self._dataset.quotes:
            if self._speedup > 0 and previous is not None:
                gap = (ev.observed_at - previous).total_seconds() / self._speedup
                if gap > 0:
                    self._sleep(gap)
            previous = ev.observed_at
            yield ev


def subset(dataset: Dataset, game_ids: Iterable[str]) -> Dataset:
    """A new dataset restricted to the given games (quotes filtered to match)."""
    keep = set(game_ids)
    games = {gid: g for gid, g in dataset.games.items() if gid in keep}
    quotes = tuple(q for q in dataset.quotes if q.game_id in keep)
    return Dataset(games=games, quotes=quotes, provenance=dataset.provenance)
