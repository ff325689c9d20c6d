"""Terrain elevation lookups, batched up to 100 coordinates per request."""

from __future__ import annotations

import json

import requests

from ..errors import UpstreamUnavailableError
from .transport import Transport

BATCH_LIMIT = 100


class ElevationClient:
    client_id = "elevation"

    def __init__(self, transport: Transport, base_url: str):
        self.transport = transport
        self.base_url = base_url.rstrip("/")

    def elevations(self, coords: list[tuple[float, float]]) -> list[float]:
        out: list[float] = []
        for start in range(0, len(coords), BATCH_LIMIT):
            batch = coords[start : start + BATCH_LIMIT]
            out.extend(self._one_batch(batch))
        return out

    def _one_batch(self, batch: list[tuple[float, float]]) -> list[float]:
        lats = [float(lat) for lat, _ in batch]
        lons = [float(lon) for _, lon in batch]
        params = {"lats": lats, "lons": lons}
        lat_arg = ",".join(f"{v:.6f}" for v in lats)
        lon_arg = ",".join(f"{v:.6f}" for v in lons)

        def fetch() -> str:
            resp = requests.get(
                f"{self.base_url}/v1/elevation",
                params={"latitude": lat_arg, "longitude": lon_arg},
                timeout=30,
            )
            resp.raise_for_status()
            return resp.text

        record = self.transport.exchange(self.client_id, "elevation", params, fetch)
        try:
            doc = json.loads(record.body)
            values = [float(v) for v in doc["elevation"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise UpstreamUnavailableError(f"malformed elevation response: {exc}") from exc
        if len(values) != len(batch):
            raise UpstreamUnavailableError(
                f"elevation count mismatch: asked {len(batch)}, got {len(values)}"
            )
        return values
