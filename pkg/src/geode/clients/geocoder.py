"""Free-text geocoding against a search endpoint.

Speaks the common open-geocoder wire shape: GET /search with a query
string, JSON list of hits ordered by rank, each hit carrying string
lat/lon, a display name, a [south, north, west, east] bounding box, and
optionally polygon geometry in GeoJSON (coordinates in [lon, lat]).
"""

from __future__ import annotations

import json

import requests

from ..errors import EmptyInputError, GeocodeNotFoundError, UpstreamUnavailableError
from ..patch import GeoPatch, LatLon, make_point_patch, make_region_patch
from .transport import Transport

USER_AGENT = "geode/0.1 (offline-first geospatial QA engine)"


class GeocoderClient:
    client_id = "geocoder"

    def __init__(self, transport: Transport, base_url: str):
        self.transport = transport
        self.base_url = base_url.rstrip("/")

    def _search(self, name: str) -> list:
        if not name or not name.strip():
            raise EmptyInputError("place name must be nonempty")
        params = {"q": name, "format": "json", "polygon_geojson": 1, "limit": 1}

        def fetch() -> str:
            resp = requests.get(
                f"{self.base_url}/search",
                params=params,
                headers={"User-Agent": USER_AGENT},
                timeout=30,
            )
            resp.raise_for_status()
            return resp.text

        record = self.transport.exchange(self.client_id, "search", params, fetch)
        try:
            hits = json.loads(record.body)
        except json.JSONDecodeError as exc:
            raise UpstreamUnavailableError(f"geocoder returned invalid JSON: {exc}") from exc
        if not isinstance(hits, list):
            raise UpstreamUnavailableError("geocoder returned an unexpected document shape")
        return hits

    def geocode_point(self, name: str) -> GeoPatch:
        hits = self._search(name)
        if not hits:
            raise GeocodeNotFoundError(f"no geocoder hit for {name!r}")
        hit = hits[0]
        try:
            position = LatLon(float(hit["lat"]), float(hit["lon"]))
            display = hit.get("display_name") or name
        except (KeyError, TypeError, ValueError) as exc:
            raise UpstreamUnavailableError(f"malformed geocoder hit: {exc}") from exc
        return make_point_patch(position, display)

    def geocode_patch(self, name: str) -> GeoPatch:
        hits = self._search(name)
        if not hits:
            raise GeocodeNotFoundError(f"no geocoder hit for {name!r}")
        hit = hits[0]
        display = hit.get("display_name") or name
        rings = _rings_from_hit(hit)
        if not rings:
            raise UpstreamUnavailableError(f"geocoder hit for {name!r} carries no usable geometry")
        location = None
        try:
            location = LatLon(float(hit["lat"]), float(hit["lon"]))
        except (KeyError, TypeError, ValueError):
            pass
        patch = make_region_patch(rings, display, location=None)
        if location is not None and patch.vector.bbox.contains(location.lat, location.lon):
            patch = make_region_patch(rings, display, location=location)
        return patch


def _rings_from_hit(hit: dict) -> list:
    """Boundary rings from a geocoder hit, flipping GeoJSON [lon, lat]
    into (lat, lon). Falls back to the bounding-box rectangle."""
    geo = hit.get("geojson") or {}
    gtype = geo.get("type")
    coords = geo.get("coordinates")
    rings = []
    if gtype == "Polygon" and coords:
        rings = [_flip(ring) for ring in coords]
    elif gtype == "MultiPolygon" and coords:
        rings = [_flip(ring) for poly in coords for ring in poly]
    rings = [r for r in rings if len(r) >= 4]
    if rings:
        return rings
    box = hit.get("boundingbox")
    if not box or len(box) != 4:
        return []
    try:
        south, north, west, east = (float(v) for v in box)
    except (TypeError, ValueError):
        return []
    if south == north or west == east:
        return []
    return [
        [(south, west), (south, east), (north, east), (north, west), (south, west)]
    ]


def _flip(ring) -> list:
    return [(float(lat), float(lon)) for lon, lat in ring]
