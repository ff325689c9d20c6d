"""Engine configuration, resolved from environment variables.

Network mode defaults to offline: nothing leaves the process unless
GEODE_NET_MODE says so, and offline runs replay recorded fixtures from
GEODE_FIXTURES (default: the fixture set shipped inside the package).
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

NET_MODES = ("live", "record", "offline")
BACKENDS = ("hosted-a", "hosted-b", "local", "canned")

_DATA_DIR = Path(__file__).resolve().parent / "data"


def packaged_fixtures_dir() -> Path:
    return _DATA_DIR / "fixtures"


def packaged_golden_plans() -> Path:
    return _DATA_DIR / "golden_plans.json"


@dataclass
class EngineConfig:
    net_mode: str = "offline"
    fixtures_dir: Path = field(default_factory=packaged_fixtures_dir)
    backend: str = "canned"
    golden_plans_path: Path = field(default_factory=packaged_golden_plans)

    geocoder_base_url: str = "https://nominatim.openstreetmap.org"
    weather_base_url: str = "https://api.weatherapi.com"
    elevation_base_url: str = "https://api.open-meteo.com"
    weather_api_key: str | None = None

    seed: int = 1729
    sample_count: int = 48
    grid_rows: int = 64
    grid_cols: int = 64
    max_in_flight: int = 8

    hosted_a_key: str | None = None
    hosted_b_key: str | None = None
    local_planner_url: str | None = None
    backend_timeout_s: float = 60.0

    def __post_init__(self):
        if self.net_mode not in NET_MODES:
            raise ValueError(f"net mode must be one of {NET_MODES}, got {self.net_mode!r}")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}, got {self.backend!r}")
        self.fixtures_dir = Path(self.fixtures_dir)
        self.golden_plans_path = Path(self.golden_plans_path)

    @classmethod
    def from_env(cls, env: dict[str, str] | None = None, **overrides) -> "EngineConfig":
        env = dict(os.environ if env is None else env)
        kwargs: dict = {}
        if "GEODE_NET_MODE" in env:
            kwargs["net_mode"] = env["GEODE_NET_MODE"]
        if "GEODE_FIXTURES" in env:
            kwargs["fixtures_dir"] = Path(env["GEODE_FIXTURES"])
        if "GEODE_BACKEND" in env:
            kwargs["backend"] = env["GEODE_BACKEND"]
        if "GEODE_GOLDEN_PLANS" in env:
            kwargs["golden_plans_path"] = Path(env["GEODE_GOLDEN_PLANS"])
        if "GEOCODER_BASE_URL" in env:
            kwargs["geocoder_base_url"] = env["GEOCODER_BASE_URL"]
        if "WEATHER_BASE_URL" in env:
            kwargs["weather_base_url"] = env["WEATHER_BASE_URL"]
        if "ELEVATION_BASE_URL" in env:
            kwargs["elevation_base_url"] = env["ELEVATION_BASE_URL"]
        if "WEATHER_API_KEY" in env:
            kwargs["weather_api_key"] = env["WEATHER_API_KEY"]
        if "GEODE_SEED" in env:
            kwargs["seed"] = int(env["GEODE_SEED"])
        if "HOSTED_A_KEY" in env:
            kwargs["hosted_a_key"] = env["HOSTED_A_KEY"]
        if "HOSTED_B_KEY" in env:
            kwargs["hosted_b_key"] = env["HOSTED_B_KEY"]
        if "LOCAL_PLANNER_URL" in env:
            kwargs["local_planner_url"] = env["LOCAL_PLANNER_URL"]
        kwargs.update(overrides)
        return cls(**kwargs)
