"""Numerical kernels behind the analytical experts.

RBF field regression, nearest-neighbor imputation, Pearson correlation,
thresholding, raster and boundary intersection, and raster statistics.
All functions are pure: they take immutable layers or patches and return
new values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import geometry, patch as patchmod
from .errors import (
    EmptyGeometryError,
    EmptyInputError,
    MissingRasterError,
    MissingValueError,
    NumericalFailureError,
    RasterTypeError,
    ShapeMismatchError,
    ThresholdRangeError,
    UndefinedCorrelationError,
)
from .patch import (
    BBox,
    DataPoint,
    GeoPatch,
    GridSpec,
    LatLon,
    RasterLayer,
    RasterType,
    VectorLayer,
)

# Interpolation quality at the sample positions is the contract (within 1%
# relative), and the plain median-distance length scale cannot deliver it:
# the kernel system it builds is so ill-conditioned that any nugget large
# enough to solve it smooths the fit by hundreds of percent. A quarter of
# the median with a tiny diagonal lift keeps the system solvable and the
# fit inside tolerance with headroom.
LENGTH_SCALE_MEDIAN_FRACTION = 0.25
LENGTH_SCALE_FLOOR = 1e-6
DEFAULT_NUGGET = 1e-9


@dataclass(frozen=True)
class RbfConfig:
    """Gaussian kernel k(a,b) = exp(-d^2 / (2 l^2)) with d the
    equirectangular degree distance (lon axis scaled by cos of the pair's
    mean latitude). length_scale None means the median-distance heuristic."""

    length_scale: float | None = None
    nugget: float = DEFAULT_NUGGET

    def __post_init__(self):
        if self.length_scale is not None and not self.length_scale > 0:
            raise NumericalFailureError(f"length scale must be positive, got {self.length_scale}")
        if self.nugget < 0:
            raise NumericalFailureError(f"nugget must be nonnegative, got {self.nugget}")


@dataclass(frozen=True)
class Sample:
    position: LatLon
    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v):
            raise MissingValueError(f"sample value must be finite, got {v!r}")
        object.__setattr__(self, "value", v)


def _as_sample_arrays(samples: Sequence) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Normalize Sample objects or (lat, lon, value) triples into sorted,
    position-deduplicated arrays. Sorting by (lat, lon, value) before the
    dedup makes the fit bit-identical under input permutation."""
    rows = []
    for s in samples:
        if isinstance(s, Sample):
            rows.append((s.position.lat, s.position.lon, s.value))
        else:
            lat, lon, value = s
            pos = LatLon(lat, lon)
            if not math.isfinite(float(value)):
                raise MissingValueError(f"sample value must be finite, got {value!r}")
            rows.append((pos.lat, pos.lon, float(value)))
    if not rows:
        raise EmptyInputError("no samples")
    rows.sort()
    lats, lons, vals = [], [], []
    for lat, lon, value in rows:
        if lats and lat == lats[-1] and lon == lons[-1]:
            continue
        lats.append(lat)
        lons.append(lon)
        vals.append(value)
    return np.array(lats), np.array(lons), np.array(vals)


def _pair_sqdist(lat_a, lon_a, lat_b, lon_b):
    """Squared equirectangular degree distance, broadcast over the cross
    product of the two point sets."""
    la = np.asarray(lat_a, dtype=float)[:, None]
    lb = np.asarray(lat_b, dtype=float)[None, :]
    oa = np.asarray(lon_a, dtype=float)[:, None]
    ob = np.asarray(lon_b, dtype=float)[None, :]
    scale = np.cos(np.radians((la + lb) / 2.0))
    return (la - lb) ** 2 + (scale * (oa - ob)) ** 2


class RbfModel:
    """A fitted RBF field: kernel weights over the training samples plus
    the mean offset, so a constant input is reproduced exactly."""

    def __init__(self, lats, lons, weights, mean, length_scale):
        self._lats = lats
        self._lons = lons
        self._weights = weights
        self._mean = mean
        self.length_scale = length_scale

    def predict(self, positions: Sequence[tuple[float, float]]) -> np.ndarray:
        lats = np.array([p[0] for p in positions], dtype=float)
        lons = np.array([p[1] for p in positions], dtype=float)
        d2 = _pair_sqdist(lats, lons, self._lats, self._lons)
        k = np.exp(-d2 / (2.0 * self.length_scale**2))
        return self._mean + k @ self._weights

    def predict_grid(self, spec: GridSpec) -> np.ndarray:
        cell_lats, cell_lons = patchmod.grid_cell_centers(spec)
        lat_m, lon_m = np.meshgrid(cell_lats, cell_lons, indexing="ij")
        flat = self.predict(np.column_stack([lat_m.ravel(), lon_m.ravel()]))
        return flat.reshape(spec.rows, spec.cols)


def rbf_fit(samples: Sequence, config: RbfConfig = RbfConfig()) -> RbfModel:
    lats, lons, vals = _as_sample_arrays(samples)
    n = lats.size
    mean = float(vals.mean())
    if n == 1:
        return RbfModel(lats, lons, np.zeros(1), mean, 1.0)
    d2 = _pair_sqdist(lats, lons, lats, lons)
    if config.length_scale is not None:
        ell = config.length_scale
    else:
        pair = np.sqrt(d2[np.triu_indices(n, k=1)])
        ell = max(float(np.median(pair)) * LENGTH_SCALE_MEDIAN_FRACTION, LENGTH_SCALE_FLOOR)
    k = np.exp(-d2 / (2.0 * ell**2))
    system = k + config.nugget * float(np.mean(np.diag(k))) * np.eye(n)
    try:
        weights = np.linalg.solve(system, vals - mean)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(system))
        raise NumericalFailureError(
            f"kernel system is singular even with nugget {config.nugget} (condition estimate {cond:.3e})"
        ) from exc
    if not np.isfinite(weights).all():
        raise NumericalFailureError("kernel solve produced non-finite weights")
    return RbfModel(lats, lons, weights, mean, ell)


def rbf_fit_predict(samples: Sequence, spec: GridSpec, config: RbfConfig = RbfConfig()) -> np.ndarray:
    return rbf_fit(samples, config).predict_grid(spec)


def impute_nearest(layer: RasterLayer) -> RasterLayer:
    """Fill every missing cell with the value of the nearest present cell
    (Euclidean distance in cell index space, row-major tie-break)."""
    grid = layer.grid
    present = np.isfinite(grid)
    if not present.any():
        raise EmptyInputError("all cells missing, nothing to impute from")
    if present.all():
        return layer
    pr, pc = np.nonzero(present)  # nonzero scans row-major, ties resolve to the first hit
    values = grid[pr, pc]
    mr, mc = np.nonzero(~present)
    out = grid.copy()
    chunk = max(1, 262144 // max(pr.size, 1))
    for start in range(0, mr.size, chunk):
        rr = mr[start : start + chunk]
        cc = mc[start : start + chunk]
        d2 = (rr[:, None] - pr[None, :]) ** 2 + (cc[:, None] - pc[None, :]) ** 2
        out[rr, cc] = values[np.argmin(d2, axis=1)]
    return RasterLayer(name=layer.name, rtype=layer.rtype, grid=out, bbox=layer.bbox, colormap=layer.colormap)


def resample_nearest(layer: RasterLayer, spec: GridSpec) -> RasterLayer:
    """Project a layer onto another grid by nearest cell-center lookup."""
    lats, lons = patchmod.grid_cell_centers(spec)
    src = layer.spec
    if src.lat_step == 0.0:
        rows = np.zeros(lats.size, dtype=int)
    else:
        rows = np.clip(np.floor((src.bbox.max_lat - lats) / src.lat_step).astype(int), 0, src.rows - 1)
    if src.lon_step == 0.0:
        cols = np.zeros(lons.size, dtype=int)
    else:
        cols = np.clip(np.floor((lons - src.bbox.min_lon) / src.lon_step).astype(int), 0, src.cols - 1)
    out = layer.grid[rows[:, None], cols[None, :]]
    return RasterLayer(name=layer.name, rtype=layer.rtype, grid=out, bbox=spec.bbox, colormap=layer.colormap)


def pearson_correlation(a: RasterLayer, b: RasterLayer) -> float:
    if a.grid.shape != b.grid.shape:
        raise ShapeMismatchError(f"grid shapes differ: {a.grid.shape} vs {b.grid.shape}")
    joint = np.isfinite(a.grid) & np.isfinite(b.grid)
    if joint.sum() < 2:
        raise EmptyInputError(f"need at least 2 jointly present cells, got {int(joint.sum())}")
    va = a.grid[joint]
    vb = b.grid[joint]
    da = va - va.mean()
    db = vb - vb.mean()
    denom = math.sqrt(float(da @ da) * float(db @ db))
    if denom == 0.0:
        which = a.name if float(da @ da) == 0.0 else b.name
        raise UndefinedCorrelationError(f"correlation undefined: {which!r} is constant on the joint support")
    r = float(da @ db) / denom
    return min(max(r, -1.0), 1.0)


def threshold(layer: RasterLayer, t: float, mode: str = "greater", relative: bool = True) -> RasterLayer:
    """Binary mask of cells at or past a cutoff. Relative t picks the
    cutoff as min + t * (max - min) over present cells; comparisons are
    inclusive so t=0 'greater' keeps everything."""
    if mode not in ("greater", "less"):
        raise ThresholdRangeError(f"mode must be 'greater' or 'less', got {mode!r}")
    present = np.isfinite(layer.grid)
    if not present.any():
        raise EmptyInputError("no present cells to threshold")
    if relative:
        if not 0.0 <= t <= 1.0:
            raise ThresholdRangeError(f"relative threshold must be in [0, 1], got {t}")
        lo = float(layer.grid[present].min())
        hi = float(layer.grid[present].max())
        cutoff = lo + t * (hi - lo)
    else:
        cutoff = float(t)
    out = np.full(layer.grid.shape, np.nan)
    if mode == "greater":
        out[present] = (layer.grid[present] >= cutoff).astype(float)
    else:
        out[present] = (layer.grid[present] <= cutoff).astype(float)
    return RasterLayer(name=layer.name, rtype=RasterType.binary, grid=out, bbox=layer.bbox, colormap=layer.colormap)


def raster_intersection(a: RasterLayer, b: RasterLayer) -> RasterLayer:
    if a.rtype is not RasterType.binary or b.rtype is not RasterType.binary:
        raise RasterTypeError(f"raster intersection needs binary layers, got {a.rtype.value} and {b.rtype.value}")
    if a.grid.shape != b.grid.shape:
        raise ShapeMismatchError(f"grid shapes differ: {a.grid.shape} vs {b.grid.shape}")
    if not patchmod.bbox_close(a.bbox, b.bbox):
        raise ShapeMismatchError(f"bboxes differ: {a.bbox.as_list()} vs {b.bbox.as_list()}")
    joint = np.isfinite(a.grid) & np.isfinite(b.grid)
    out = np.full(a.grid.shape, np.nan)
    out[joint] = np.minimum(a.grid[joint], b.grid[joint])
    return RasterLayer(
        name=f"{a.name} and {b.name}",
        rtype=RasterType.binary,
        grid=out,
        bbox=a.bbox,
        colormap=a.colormap,
    )


def _boundary_rings(p: GeoPatch):
    if p.vector.boundary:
        return list(p.vector.boundary)
    if p.vector.bbox.is_degenerate:
        raise EmptyGeometryError(f"patch {p.name!r} has no boundary and a degenerate bbox")
    return [patchmod.bbox_rect_ring(p.vector.bbox)]


def vector_intersection(p1: GeoPatch, p2: GeoPatch) -> GeoPatch:
    """Geometric intersection of two patch boundaries.

    Convex-against-any ring pairs clip exactly; concave-against-concave
    pairs go through a conservative 256x256 mask intersection. Markers
    from both patches survive when they fall inside the result; an empty
    intersection comes back as a zero-area patch between the two inputs.
    """
    rings1 = _boundary_rings(p1)
    rings2 = _boundary_rings(p2)
    name = f"intersection of {p1.name} and {p2.name}"
    out_rings: list = []
    for ra in rings1:
        for rb in rings2:
            if tuple(ra) == tuple(rb):
                out_rings.append(list(ra))
            elif geometry.ring_is_convex(ra):
                clipped = geometry.clip_ring_by_convex(rb, ra)
                if clipped is not None:
                    out_rings.append(clipped)
            elif geometry.ring_is_convex(rb):
                clipped = geometry.clip_ring_by_convex(ra, rb)
                if clipped is not None:
                    out_rings.append(clipped)
            else:
                out_rings.extend(geometry.rasterized_intersection([ra], [rb]))
    out_rings = [r for r in out_rings if abs(geometry.planar_area(r)) >= geometry.DEGENERATE_RING_AREA]
    if not out_rings:
        mid_lat = (p1.vector.location.lat + p2.vector.location.lat) / 2.0
        mid_lon = (p1.vector.location.lon + p2.vector.location.lon) / 2.0
        mid = LatLon(mid_lat, mid_lon)
        vector = VectorLayer(
            location=mid,
            bbox=BBox(mid.lat, mid.lat, mid.lon, mid.lon),
            boundary=(),
            points=(),
        )
        return GeoPatch(vector=vector, name=f"{name} (empty intersection)")
    bbox = BBox(*geometry.hull_of_rings(out_rings))
    seen = set()
    points = []
    for dp in list(p1.vector.points) + list(p2.vector.points):
        key = (dp.position.lat, dp.position.lon, dp.name)
        if key in seen:
            continue
        seen.add(key)
        if geometry.point_in_rings(dp.position.lat, dp.position.lon, out_rings):
            points.append(dp)
    # parity-weighted centroid: nested rings subtract as holes
    num_lat = num_lon = denom = 0.0
    for i, ring in enumerate(out_rings):
        depth = sum(
            1
            for j, other in enumerate(out_rings)
            if j != i and geometry.point_in_ring(ring[0][0], ring[0][1], other)
        )
        sign = 1.0 if depth % 2 == 0 else -1.0
        area = geometry.sphere_ring_area_km2(ring)
        clat, clon = geometry.ring_centroid(ring)
        num_lat += sign * area * clat
        num_lon += sign * area * clon
        denom += sign * area
    if denom > 0:
        loc = LatLon(
            min(max(num_lat / denom, bbox.min_lat), bbox.max_lat),
            min(max(num_lon / denom, bbox.min_lon), bbox.max_lon),
        )
    else:
        loc = bbox.center()
    vector = VectorLayer(location=loc, bbox=bbox, boundary=tuple(tuple(r) for r in out_rings), points=tuple(points))
    return GeoPatch(vector=vector, name=name)


def raster_stats(layer: RasterLayer, stat: str) -> float:
    present = layer.grid[np.isfinite(layer.grid)]
    if present.size == 0:
        raise EmptyInputError("no present cells")
    if stat == "min":
        return float(present.min())
    if stat == "max":
        return float(present.max())
    if stat == "mean":
        return float(present.mean())
    if stat == "std":
        if present.size < 2:
            raise EmptyInputError("population std needs at least 2 present cells")
        return float(present.std())  # population, not sample
    raise ThresholdRangeError(f"unknown statistic {stat!r}")


def raster_argmax(patch: GeoPatch) -> GeoPatch:
    """Point patch at the grid cell holding the maximum value (first such
    cell in row-major order)."""
    if patch.raster is None:
        raise MissingRasterError(f"patch {patch.name!r} has no raster")
    grid = patch.raster.grid
    if not np.isfinite(grid).any():
        raise EmptyInputError("no present cells")
    flat = np.nanargmax(grid)
    row, col = divmod(int(flat), grid.shape[1])
    center = patchmod.cell_to_latlon(patch.raster.spec, row, col)
    value = float(grid[row, col])
    name = f"max of {patch.raster.name}"
    point = DataPoint(position=center, name=name, value=value)
    vector = VectorLayer(
        location=center,
        bbox=BBox(center.lat, center.lat, center.lon, center.lon),
        boundary=(),
        points=(point,),
    )
    return GeoPatch(vector=vector, name=name)
