"""Geospatial patch data model and grid registration.

The unit every expert passes around is a GeoPatch: a mandatory vector
layer (location, bbox, optional boundary rings, optional point markers)
plus an optional raster layer holding a north-up value grid. All types
are immutable after construction; operations return new values.

Coordinate order is (lat, lon) everywhere in this package. Grids are
row-major with row 0 at the northern edge and column 0 at the western
edge; missing cells are NaN.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import geometry
from .errors import (
    CellIndexError,
    CoordinateRangeError,
    EmptyGeometryError,
    EmptyInputError,
    InvalidRingError,
    OutOfBoundsError,
    RasterTypeError,
    ShapeMismatchError,
)

DEFAULT_GRID_ROWS = 64
DEFAULT_GRID_COLS = 64

# colormap names with a shipped lookup table (see visualize.py)
KNOWN_COLORMAPS = frozenset(
    {"Greys", "Oranges", "Blues", "YlOrBr", "magma", "gray", "viridis"}
)


class RasterType(str, Enum):
    color = "color"
    non_color = "non_color"
    binary = "binary"


@dataclass(frozen=True)
class LatLon:
    """A position in degrees. Longitude wraps into [-180, 180]; latitude
    outside [-90, 90] is an error, wrapping it would be wrong."""

    lat: float
    lon: float

    def __post_init__(self):
        lat = float(self.lat)
        lon = float(self.lon)
        if not math.isfinite(lat) or not -90.0 <= lat <= 90.0:
            raise CoordinateRangeError(f"latitude {lat!r} outside [-90, 90]")
        if not math.isfinite(lon):
            raise CoordinateRangeError(f"longitude {lon!r} is not finite")
        if not -180.0 <= lon <= 180.0:
            lon = ((lon + 180.0) % 360.0) - 180.0
        object.__setattr__(self, "lat", lat)
        object.__setattr__(self, "lon", lon)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned extent. Longitudes are kept as given (a band like
    [0, 360] is legal) so area math on wide rectangles stays exact."""

    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self):
        vals = [float(self.min_lat), float(self.max_lat), float(self.min_lon), float(self.max_lon)]
        if not all(math.isfinite(v) for v in vals):
            raise CoordinateRangeError("bbox edges must be finite")
        if not -90.0 <= vals[0] <= 90.0 or not -90.0 <= vals[1] <= 90.0:
            raise CoordinateRangeError("bbox latitude outside [-90, 90]")
        if vals[0] > vals[1]:
            raise CoordinateRangeError(f"bbox min_lat {vals[0]} > max_lat {vals[1]}")
        if vals[2] > vals[3]:
            raise CoordinateRangeError(f"bbox min_lon {vals[2]} > max_lon {vals[3]}")
        for name, v in zip(("min_lat", "max_lat", "min_lon", "max_lon"), vals):
            object.__setattr__(self, name, v)

    @property
    def lat_span(self) -> float:
        return self.max_lat - self.min_lat

    @property
    def lon_span(self) -> float:
        return self.max_lon - self.min_lon

    @property
    def is_degenerate(self) -> bool:
        return self.lat_span == 0.0 and self.lon_span == 0.0

    def center(self) -> LatLon:
        return LatLon((self.min_lat + self.max_lat) / 2.0, (self.min_lon + self.max_lon) / 2.0)

    def contains(self, lat: float, lon: float, tol: float = 1e-9) -> bool:
        if not self.min_lat - tol <= lat <= self.max_lat + tol:
            return False
        if self.min_lon - tol <= lon <= self.max_lon + tol:
            return True
        # a band past the antimeridian may be queried with wrapped longitude
        if self.max_lon > 180.0 and self.min_lon - tol <= lon + 360.0 <= self.max_lon + tol:
            return True
        return False

    def as_list(self) -> list[float]:
        return [self.min_lat, self.max_lat, self.min_lon, self.max_lon]


def bbox_close(a: BBox, b: BBox, tol: float = 1e-9) -> bool:
    return (
        abs(a.min_lat - b.min_lat) <= tol
        and abs(a.max_lat - b.max_lat) <= tol
        and abs(a.min_lon - b.min_lon) <= tol
        and abs(a.max_lon - b.max_lon) <= tol
    )


@dataclass(frozen=True)
class DataPoint:
    """A named point marker, optionally carrying one measured value."""

    position: LatLon
    name: str
    value: float | None = None
    unit: str | None = None

    def __post_init__(self):
        if not self.name:
            raise EmptyInputError("data point name must be nonempty")
        if self.value is not None:
            object.__setattr__(self, "value", float(self.value))


Ring = tuple[tuple[float, float], ...]


def _freeze_ring(ring: Sequence[Sequence[float]]) -> Ring:
    closed = geometry.close_ring([(p[0], p[1]) for p in ring])
    if geometry.distinct_vertices(closed) < 3:
        raise InvalidRingError(f"ring needs >= 3 distinct vertices, got {geometry.distinct_vertices(closed)}")
    if not geometry.ring_is_simple(closed):
        raise InvalidRingError("ring is self-intersecting")
    return tuple(closed)


@dataclass(frozen=True)
class VectorLayer:
    location: LatLon
    bbox: BBox
    boundary: tuple[Ring, ...] = ()
    points: tuple[DataPoint, ...] = ()

    def __post_init__(self):
        rings = tuple(_freeze_ring(r) for r in self.boundary)
        object.__setattr__(self, "boundary", rings)
        object.__setattr__(self, "points", tuple(self.points))
        if rings:
            hull = geometry.hull_of_rings(rings)
            want = BBox(*hull)
            if not bbox_close(self.bbox, want):
                raise InvalidRingError(
                    f"bbox {self.bbox.as_list()} does not match boundary hull {want.as_list()}"
                )
        if not self.bbox.contains(self.location.lat, self.location.lon):
            raise OutOfBoundsError(
                f"location ({self.location.lat}, {self.location.lon}) outside bbox {self.bbox.as_list()}"
            )


@dataclass(frozen=True, eq=False)
class RasterLayer:
    """A value grid over a bbox. Grid is float64, NaN marks missing,
    frozen read-only after construction."""

    name: str
    rtype: RasterType
    grid: np.ndarray
    bbox: BBox
    colormap: str | None = None

    # ndarray fields break the generated __eq__, compare grids by value
    def __eq__(self, other):
        if not isinstance(other, RasterLayer):
            return NotImplemented
        return (
            self.name == other.name
            and self.rtype == other.rtype
            and self.colormap == other.colormap
            and self.bbox == other.bbox
            and self.grid.shape == other.grid.shape
            and np.array_equal(self.grid, other.grid, equal_nan=True)
        )

    __hash__ = object.__hash__

    def __post_init__(self):
        grid = np.array(self.grid, dtype=float)
        if grid.ndim != 2 or grid.shape[0] < 1 or grid.shape[1] < 1:
            raise EmptyInputError(f"raster grid must be 2-D and at least 1x1, got shape {grid.shape}")
        grid.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "rtype", RasterType(self.rtype))
        if self.rtype is RasterType.binary:
            present = grid[np.isfinite(grid)]
            if present.size and not np.isin(present, (0.0, 1.0)).all():
                raise RasterTypeError("binary raster cells must be 0 or 1")
        if self.colormap is not None and self.colormap not in KNOWN_COLORMAPS:
            raise RasterTypeError(f"unknown colormap {self.colormap!r}")

    @property
    def rows(self) -> int:
        return self.grid.shape[0]

    @property
    def cols(self) -> int:
        return self.grid.shape[1]

    @property
    def spec(self) -> GridSpec:
        return GridSpec(self.rows, self.cols, self.bbox)


@dataclass(frozen=True)
class GridSpec:
    rows: int
    cols: int
    bbox: BBox

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise EmptyInputError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")

    @property
    def lat_step(self) -> float:
        return self.bbox.lat_span / self.rows

    @property
    def lon_step(self) -> float:
        return self.bbox.lon_span / self.cols


@dataclass(frozen=True)
class GeoPatch:
    """One unit of geospatial context: vector layer plus optional raster.

    `name` is display metadata (map labels, text answers); it defaults to
    the raster name, then the first marker's name, and never round-trips
    through serialization.
    """

    vector: VectorLayer
    raster: RasterLayer | None = None
    name: str = ""

    def __post_init__(self):
        if self.raster is not None and not bbox_close(self.raster.bbox, self.vector.bbox):
            raise ShapeMismatchError(
                f"raster bbox {self.raster.bbox.as_list()} != vector bbox {self.vector.bbox.as_list()}"
            )
        if not self.name:
            if self.raster is not None:
                derived = self.raster.name
            elif self.vector.points:
                derived = self.vector.points[0].name
            else:
                derived = "patch"
            object.__setattr__(self, "name", derived)

    @property
    def ptype(self) -> str:
        if self.raster is not None:
            return "field"
        if not self.vector.boundary:
            return "point"
        return "region"


def make_point_patch(position: LatLon, name: str) -> GeoPatch:
    bbox = BBox(position.lat, position.lat, position.lon, position.lon)
    vector = VectorLayer(
        location=position,
        bbox=bbox,
        boundary=(),
        points=(DataPoint(position=position, name=name),),
    )
    return GeoPatch(vector=vector, name=name)


def make_region_patch(
    rings: Sequence[Sequence[Sequence[float]]],
    name: str,
    points: Sequence[DataPoint] = (),
    location: LatLon | None = None,
) -> GeoPatch:
    """Build a region patch from boundary rings; bbox is the ring hull and
    the location defaults to the largest ring's centroid (clamped into the
    bbox for safety on odd shapes)."""
    frozen = [_freeze_ring(r) for r in rings]
    if not frozen:
        raise EmptyGeometryError("region patch needs at least one boundary ring")
    bbox = BBox(*geometry.hull_of_rings(frozen))
    if location is None:
        biggest = max(frozen, key=lambda r: abs(geometry.planar_area(r)))
        clat, clon = geometry.ring_centroid(biggest)
        clat = min(max(clat, bbox.min_lat), bbox.max_lat)
        clon = min(max(clon, bbox.min_lon), bbox.max_lon)
        location = LatLon(clat, clon if -180.0 <= clon <= 180.0 else bbox.center().lon)
    vector = VectorLayer(location=location, bbox=bbox, boundary=tuple(frozen), points=tuple(points))
    return GeoPatch(vector=vector, name=name)


def bbox_of_rings(boundary: Sequence[Sequence[Sequence[float]]]) -> BBox:
    if not boundary:
        raise EmptyGeometryError("no rings to take the hull of")
    rings = [geometry.close_ring([(p[0], p[1]) for p in r]) for r in boundary]
    return BBox(*geometry.hull_of_rings(rings))


def bbox_rect_ring(bbox: BBox) -> Ring:
    return (
        (bbox.min_lat, bbox.min_lon),
        (bbox.min_lat, bbox.max_lon),
        (bbox.max_lat, bbox.max_lon),
        (bbox.max_lat, bbox.min_lon),
        (bbox.min_lat, bbox.min_lon),
    )


def patch_area(patch: GeoPatch) -> float:
    """Boundary area in million km^2, on a sphere of radius 6371 km.

    Rings nested inside another ring count as holes (containment-depth
    parity, independent of stored winding). A patch without boundary uses
    its bbox rectangle; point patches have zero area.
    """
    rings: Sequence[Ring] = patch.vector.boundary
    if not rings:
        bbox = patch.vector.bbox
        if bbox.is_degenerate:
            return 0.0
        rings = (bbox_rect_ring(bbox),)
    total = 0.0
    for i, ring in enumerate(rings):
        depth = 0
        for j, other in enumerate(rings):
            if j == i:
                continue
            if geometry.point_in_ring(ring[0][0], ring[0][1], other):
                depth += 1
        area = geometry.sphere_ring_area_km2(ring)
        total += area if depth % 2 == 0 else -area
    return max(total, 0.0) / 1e6


def cell_to_latlon(spec: GridSpec, row: int, col: int) -> LatLon:
    if not 0 <= row < spec.rows or not 0 <= col < spec.cols:
        raise CellIndexError(f"cell ({row}, {col}) outside {spec.rows}x{spec.cols} grid")
    lat = spec.bbox.max_lat - (row + 0.5) * spec.lat_step
    lon = spec.bbox.min_lon + (col + 0.5) * spec.lon_step
    if lon > 180.0:
        lon = ((lon + 180.0) % 360.0) - 180.0
    return LatLon(lat, lon)


def latlon_to_cell(spec: GridSpec, lat: float, lon: float) -> tuple[int, int]:
    """Inverse registration: nearest cell, clamped to the grid. Exact
    round-trip with cell_to_latlon on every cell center."""
    if spec.lat_step == 0.0:
        row = 0
    else:
        row = int(math.floor((spec.bbox.max_lat - lat) / spec.lat_step))
    if spec.lon_step == 0.0:
        col = 0
    else:
        if lon < spec.bbox.min_lon and spec.bbox.max_lon > 180.0:
            lon += 360.0
        col = int(math.floor((lon - spec.bbox.min_lon) / spec.lon_step))
    return (min(max(row, 0), spec.rows - 1), min(max(col, 0), spec.cols - 1))


def grid_cell_centers(spec: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Cell-center latitudes (length rows, north to south) and longitudes
    (length cols, west to east)."""
    rows = np.arange(spec.rows, dtype=float)
    cols = np.arange(spec.cols, dtype=float)
    lats = spec.bbox.max_lat - (rows + 0.5) * spec.lat_step
    lons = spec.bbox.min_lon + (cols + 0.5) * spec.lon_step
    return lats, lons


def set_raster_from_points(
    patch: GeoPatch,
    samples: Sequence[tuple[float, float, float]],
    name: str,
    rtype: RasterType = RasterType.non_color,
    colormap: str | None = None,
) -> GeoPatch:
    """Fit a smooth field through point samples and attach it as the
    patch's raster on the default grid."""
    from . import analytics  # late import, analytics builds on this module

    if not samples:
        raise EmptyInputError("no samples to build a raster from")
    bbox = patch.vector.bbox
    if bbox.is_degenerate:
        raise EmptyGeometryError("cannot fit a field on a degenerate bbox")
    for lat, lon, _ in samples:
        if not bbox.contains(lat, lon):
            raise OutOfBoundsError(f"sample ({lat}, {lon}) outside patch bbox {bbox.as_list()}")
    spec = GridSpec(DEFAULT_GRID_ROWS, DEFAULT_GRID_COLS, bbox)
    grid = analytics.rbf_fit_predict(samples, spec)
    raster = RasterLayer(name=name, rtype=rtype, grid=grid, bbox=bbox, colormap=colormap)
    return GeoPatch(vector=patch.vector, raster=raster, name=patch.name)


def get_data_points(patch: GeoPatch) -> list[DataPoint]:
    return list(patch.vector.points)
