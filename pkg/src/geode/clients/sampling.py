"""Seeded bulk sampling of positions inside a patch."""

from __future__ import annotations

import logging

import numpy as np

from .. import geometry
from ..errors import EmptyInputError
from ..patch import GeoPatch, LatLon

log = logging.getLogger(__name__)

REJECTION_CAP_FACTOR = 100


def sample_patch(patch: GeoPatch, n: int, seed: int) -> list[LatLon]:
    """Draw n positions uniformly from the patch bbox with a fixed seed.

    With a boundary, candidates are rejection-sampled into it (even-odd
    rule). After 100*n attempts the remainder falls back to plain bbox
    draws and a warning is logged. Output depends only on (bbox,
    boundary, n, seed).
    """
    if n < 1:
        raise EmptyInputError(f"sample count must be >= 1, got {n}")
    bbox = patch.vector.bbox
    rng = np.random.default_rng(seed)
    if bbox.is_degenerate:
        loc = patch.vector.location
        return [LatLon(loc.lat, loc.lon) for _ in range(n)]
    rings = patch.vector.boundary
    if not rings:
        lats = rng.uniform(bbox.min_lat, bbox.max_lat, n)
        lons = rng.uniform(bbox.min_lon, bbox.max_lon, n)
        return [_pos(lat, lon) for lat, lon in zip(lats, lons)]
    picked: list[LatLon] = []
    attempts = 0
    cap = REJECTION_CAP_FACTOR * n
    while len(picked) < n and attempts < cap:
        k = min(4 * n, cap - attempts)
        lats = rng.uniform(bbox.min_lat, bbox.max_lat, k)
        lons = rng.uniform(bbox.min_lon, bbox.max_lon, k)
        attempts += k
        inside = np.zeros(k, dtype=bool)
        for ring in rings:
            inside ^= geometry.points_in_ring(lats, lons, ring)
        for lat, lon in zip(lats[inside], lons[inside]):
            picked.append(_pos(lat, lon))
            if len(picked) == n:
                break
    if len(picked) < n:
        short = n - len(picked)
        log.warning(
            "boundary rejection sampling exhausted %d attempts, filling %d of %d from bbox",
            cap,
            short,
            n,
        )
        lats = rng.uniform(bbox.min_lat, bbox.max_lat, short)
        lons = rng.uniform(bbox.min_lon, bbox.max_lon, short)
        picked.extend(_pos(lat, lon) for lat, lon in zip(lats, lons))
    return picked


def _pos(lat: float, lon: float) -> LatLon:
    return LatLon(float(lat), float(lon))
