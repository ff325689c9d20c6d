"""Current-conditions weather and air quality at a coordinate.

Wire shape is the common commercial current-weather API: GET
/v1/current.json?q=<lat>,<lon>&aqi=yes with the key as a query
parameter. The key never enters the replay cache key.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import requests

from ..errors import UpstreamUnavailableError
from .transport import Transport, parse_utc


@dataclass(frozen=True)
class CurrentConditions:
    humidity: float
    precip_mm: float
    temp_c: float
    air_quality: dict
    observed_epoch: int | None
    retrieved_epoch: float


class WeatherClient:
    client_id = "weather"

    def __init__(self, transport: Transport, base_url: str, api_key: str | None = None):
        self.transport = transport
        self.base_url = base_url.rstrip("/")
        self.api_key = api_key

    def current(self, lat: float, lon: float) -> CurrentConditions:
        # the canonical key holds only the rounded coordinates; the same
        # rounding goes on the wire so replay and live agree
        params = {"lat": float(lat), "lon": float(lon), "aqi": "yes"}
        q = f"{lat:.6f},{lon:.6f}"

        def fetch() -> str:
            resp = requests.get(
                f"{self.base_url}/v1/current.json",
                params={"q": q, "aqi": "yes", "key": self.api_key or ""},
                timeout=30,
            )
            resp.raise_for_status()
            return resp.text

        record = self.transport.exchange(self.client_id, "current", params, fetch)
        try:
            doc = json.loads(record.body)
            current = doc["current"]
            conditions = CurrentConditions(
                humidity=float(current["humidity"]),
                precip_mm=float(current["precip_mm"]),
                temp_c=float(current["temp_c"]),
                air_quality=dict(current.get("air_quality") or {}),
                observed_epoch=(
                    int(current["last_updated_epoch"]) if "last_updated_epoch" in current else None
                ),
                retrieved_epoch=parse_utc(record.recorded_at).timestamp(),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise UpstreamUnavailableError(f"malformed weather response: {exc}") from exc
        return conditions

    def value_for(self, conditions: CurrentConditions, field: str, parameter: str | None) -> float:
        if field == "humidity":
            return conditions.humidity
        if field == "precipitation":
            return conditions.precip_mm
        if field == "temperature":
            return conditions.temp_c
        if field == "air_quality":
            try:
                return float(conditions.air_quality[parameter])
            except (KeyError, TypeError, ValueError) as exc:
                raise UpstreamUnavailableError(
                    f"air quality parameter {parameter!r} missing from response"
                ) from exc
        raise UpstreamUnavailableError(f"field {field!r} is not a weather field")
