"""Canonical patch serialization.

One fixed document shape is shared by fixtures, golden files, and the
HTTP service, with field order pinned so serialized output is byte-stable
across runs:

    {"vector": {"location": [lat, lon],
                "bbox": [min_lat, max_lat, min_lon, max_lon],
                "boundary": [[[lat, lon], ...], ...],
                "points": [{"lat":, "lon":, "name":, "value"?, "unit"?}, ...]},
     "raster": {"name":, "rtype":, "colormap"?, "rows":, "cols":,
                "grid": [row-major numbers, null for missing]}}

The raster key is omitted for patches without one; optional keys are
omitted rather than set to null.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .errors import SerdeError
from .patch import (
    BBox,
    DataPoint,
    GeoPatch,
    LatLon,
    RasterLayer,
    RasterType,
    VectorLayer,
)


def patch_to_doc(patch: GeoPatch) -> dict[str, Any]:
    vec = patch.vector
    points = []
    for p in vec.points:
        entry: dict[str, Any] = {"lat": p.position.lat, "lon": p.position.lon, "name": p.name}
        if p.value is not None:
            entry["value"] = p.value
            if p.unit is not None:
                entry["unit"] = p.unit
        points.append(entry)
    doc: dict[str, Any] = {
        "vector": {
            "location": [vec.location.lat, vec.location.lon],
            "bbox": vec.bbox.as_list(),
            "boundary": [[[lat, lon] for lat, lon in ring] for ring in vec.boundary],
            "points": points,
        }
    }
    if patch.raster is not None:
        ras = patch.raster
        rdoc: dict[str, Any] = {"name": ras.name, "rtype": ras.rtype.value}
        if ras.colormap is not None:
            rdoc["colormap"] = ras.colormap
        rdoc["rows"] = ras.rows
        rdoc["cols"] = ras.cols
        rdoc["grid"] = [None if math.isnan(v) else v for v in ras.grid.ravel().tolist()]
        doc["raster"] = rdoc
    return doc


def doc_to_patch(doc: dict[str, Any], name: str = "") -> GeoPatch:
    try:
        vec = doc["vector"]
        location = LatLon(vec["location"][0], vec["location"][1])
        bbox = BBox(*vec["bbox"])
        boundary = tuple(tuple((float(p[0]), float(p[1])) for p in ring) for ring in vec.get("boundary", []))
        points = []
        for p in vec.get("points", []):
            points.append(
                DataPoint(
                    position=LatLon(p["lat"], p["lon"]),
                    name=p["name"],
                    value=p.get("value"),
                    unit=p.get("unit"),
                )
            )
        vector = VectorLayer(location=location, bbox=bbox, boundary=boundary, points=tuple(points))
        raster = None
        if "raster" in doc:
            rdoc = doc["raster"]
            rows, cols = int(rdoc["rows"]), int(rdoc["cols"])
            flat = rdoc["grid"]
            if len(flat) != rows * cols:
                raise SerdeError(f"grid length {len(flat)} != rows*cols {rows * cols}")
            grid = [
                [float("nan") if flat[r * cols + c] is None else float(flat[r * cols + c]) for c in range(cols)]
                for r in range(rows)
            ]
            raster = RasterLayer(
                name=rdoc["name"],
                rtype=RasterType(rdoc["rtype"]),
                grid=grid,
                bbox=bbox,
                colormap=rdoc.get("colormap"),
            )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise SerdeError(f"malformed patch document: {exc}") from exc
    return GeoPatch(vector=vector, raster=raster, name=name)


def dumps_canonical(doc: Any) -> str:
    """Compact JSON with pinned key order (insertion order, not sorted)."""
    return json.dumps(doc, separators=(",", ":"), allow_nan=False)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SerdeError(f"invalid JSON: {exc}") from exc
