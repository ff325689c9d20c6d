"""Render a patch into a map artifact: GeoJSON features plus a raster overlay.

The artifact is a plain dict ready for JSON serialization. GeoJSON uses
[lon, lat] coordinate order on the wire; everything else in this package
stays (lat, lon).
"""

import base64
import io
import json
import math
from functools import lru_cache
from pathlib import Path

import numpy as np
from PIL import Image

from .clients.sources import unit_for_name
from .geometry import planar_area, point_in_ring
from .patch import GeoPatch, RasterLayer

_DATA_DIR = Path(__file__).resolve().parent / "data"

# Overlay pixels for present cells are fully opaque; the client decides how
# much base map should show through.
OVERLAY_ALPHA = 255
FALLBACK_COLORMAP = "gray"
ZOOM_MIN = 2
ZOOM_MAX = 16


@lru_cache(maxsize=1)
def _tables() -> dict:
    return json.loads((_DATA_DIR / "colormaps.json").read_text())


@lru_cache(maxsize=None)
def colormap_lut(name: str) -> np.ndarray:
    """256x3 uint8 lookup table for a known colormap name."""
    table = _tables().get(name)
    if table is None:
        table = _tables()[FALLBACK_COLORMAP]
    return np.asarray(table, dtype=np.uint8)


def suggested_zoom(bbox) -> int:
    """Slippy-map zoom level that fits the bbox, clamped to [2, 16]."""
    span = max(bbox.lat_span, bbox.lon_span)
    if span <= 0.0:
        return ZOOM_MAX
    zoom = math.floor(math.log2(360.0 / span))
    return max(ZOOM_MIN, min(ZOOM_MAX, zoom))


def _ring_coordinates(ring) -> list[list[float]]:
    return [[float(lon), float(lat)] for lat, lon in ring]


def _group_rings(rings) -> list[list]:
    """Group even-odd rings into polygons with holes.

    A ring nested inside an odd number of others is a hole of its smallest
    enclosing outer ring; everything else is an outer ring in its own right.
    """
    depths = []
    for i, ring in enumerate(rings):
        lat, lon = ring[0]
        depths.append(sum(1 for j, other in enumerate(rings)
                          if j != i and point_in_ring(lat, lon, other)))
    polygons = []
    slot = {}
    for i, ring in enumerate(rings):
        if depths[i] % 2 == 0:
            slot[i] = len(polygons)
            polygons.append([ring])
    for i, ring in enumerate(rings):
        if depths[i] % 2 == 1:
            lat, lon = ring[0]
            best = None
            best_area = math.inf
            for j, outer in enumerate(rings):
                if depths[j] % 2 == 0 and point_in_ring(lat, lon, outer):
                    area = abs(planar_area(outer))
                    if area < best_area:
                        best, best_area = j, area
            if best is not None:
                polygons[slot[best]].append(ring)
    return polygons


def patch_features(patch: GeoPatch) -> list[dict]:
    features = []
    if patch.vector.boundary:
        polygons = [[_ring_coordinates(ring) for ring in poly]
                    for poly in _group_rings(patch.vector.boundary)]
        if len(polygons) == 1:
            geometry = {"type": "Polygon", "coordinates": polygons[0]}
        else:
            geometry = {"type": "MultiPolygon", "coordinates": polygons}
        features.append({
            "type": "Feature",
            "geometry": geometry,
            "properties": {"name": patch.name},
        })
    for point in patch.vector.points:
        features.append({
            "type": "Feature",
            "geometry": {
                "type": "Point",
                "coordinates": [point.position.lon, point.position.lat],
            },
            "properties": {
                "name": point.name,
                "value": point.value,
                "unit": point.unit,
            },
        })
    return features


def render_overlay(raster: RasterLayer) -> dict:
    grid = raster.grid
    present = np.isfinite(grid)
    name = raster.colormap if raster.colormap in _tables() else FALLBACK_COLORMAP
    lut = colormap_lut(name)

    rgba = np.zeros((*grid.shape, 4), dtype=np.uint8)
    if present.any():
        lo = float(np.nanmin(grid))
        hi = float(np.nanmax(grid))
        if hi > lo:
            norm = (grid - lo) / (hi - lo)
        else:
            norm = np.zeros_like(grid)
        norm = np.where(present, norm, 0.0)
        index = np.clip(np.rint(norm * 255.0), 0, 255).astype(np.uint8)
        rgba[..., :3] = lut[index]
        rgba[..., 3] = np.where(present, OVERLAY_ALPHA, 0)
    else:
        lo = None
        hi = None

    image = Image.fromarray(rgba, "RGBA")
    buf = io.BytesIO()
    image.save(buf, format="PNG")
    encoded = base64.b64encode(buf.getvalue()).decode("ascii")

    return {
        "image": encoded,
        "bounds": raster.bbox.as_list(),
        "legend": {
            "name": raster.name,
            "unit": unit_for_name(raster.name),
            "min": lo,
            "max": hi,
            "colormap": name,
        },
    }


def visualize(patch: GeoPatch) -> dict:
    """Build the map artifact for a patch: features, optional overlay, view."""
    artifact = {
        "geojson": {
            "type": "FeatureCollection",
            "features": patch_features(patch),
        },
        "center": [patch.vector.location.lat, patch.vector.location.lon],
        "zoom": suggested_zoom(patch.vector.bbox),
    }
    if patch.raster is not None:
        artifact["overlay"] = render_overlay(patch.raster)
    return artifact


def decode_overlay_image(encoded: str) -> np.ndarray:
    """Decode a base64 overlay back into an RGBA array. Used by tests."""
    raw = base64.b64decode(encoded.encode("ascii"))
    with Image.open(io.BytesIO(raw)) as img:
        return np.asarray(img.convert("RGBA"))
