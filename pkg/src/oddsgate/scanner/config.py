"""Scanner deployment settings: one JSON file plus environment overrides.

Every key can be overridden with an ODDSGATE_<UPPERCASE KEY> variable, e.g.
ODDSGATE_PORT=9000 or ODDSGATE_FEED=/data/quotes.jsonl.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from datetime import timedelta
from pathlib import Path

from ..core import StrategyConfig


@dataclass
class ScannerSettings:
    feed: str = ""                    # quote-stream JSONL to replay
    speedup: float = 0.0              # 0 = as fast as possible
    alpha: float = 0.05
    stake: float = 50.0
    min_quotes: int = 3
    window_open_hours: float = 5.0
    window_close_hours: float = 1.0
    db: str = "oddsgate-ledger.sqlite"
    host: str = "127.0.0.1"
    port: int = 8710
    silence_window_s: float = 300.0
    sweep_interval_s: float = 10.0
    ui_dir: str = ""

    def strategy_config(self) -> StrategyConfig:
        return StrategyConfig(
            alpha=self.alpha,
            stake=self.stake,
            min_quotes=self.min_quotes,
            window_open=timedelta(hours=self.window_open_hours),
            window_close=timedelta(hours=self.window_close_hours),
        )


def load_settings(path: str | Path | None = None, env: dict | None = None) -> ScannerSettings:
    """Settings from the config file, then environment variables on top."""
    env = os.environ if env is None else env
    raw: dict = {}
    if path:
        raw = json.loads(Path(path).read_text())
    settings = ScannerSettings()
    for f in fields(ScannerSettings):
        if f.name in raw:
            setattr(settings, f.name, raw[f.name])
        env_key = f"ODDSGATE_{f.name.upper()}"
        if env_key in env:
            value = env[env_key]
            current = getattr(settings, f.name)
            if isinstance(current, bool):
                value = value.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            setattr(settings, f.name, value)
    return settings
