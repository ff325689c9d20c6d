"""Planar and spherical ring math.

A ring is a closed sequence of (lat, lon) pairs: first vertex equals the
last, at least 3 distinct vertices. Planar helpers treat lon as x and lat
as y; the spherical area uses the longitude-band decomposition on a sphere
of radius EARTH_RADIUS_KM.

Boundaries with several rings are interpreted with the even-odd rule:
a point is inside the region when it falls inside an odd number of rings,
so rings nested inside another ring act as holes regardless of their
stored winding direction.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

EARTH_RADIUS_KM = 6371.0

Ring = Sequence[tuple[float, float]]

# rings longer than this skip the O(n^2) simplicity check at construction
SIMPLICITY_CHECK_MAX_VERTICES = 512

# rings with planar area below this (degrees^2) are treated as degenerate
DEGENERATE_RING_AREA = 1e-12


def close_ring(ring: Ring) -> list[tuple[float, float]]:
    """Return the ring with an explicit closing vertex appended if missing."""
    pts = [(float(lat), float(lon)) for lat, lon in ring]
    if pts and pts[0] != pts[-1]:
        pts.append(pts[0])
    return pts


def distinct_vertices(ring: Ring) -> int:
    return len({(lat, lon) for lat, lon in ring})


def planar_area(ring: Ring) -> float:
    """Signed shoelace area in degrees^2 (positive for counterclockwise)."""
    a = 0.0
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        a += lon1 * lat2 - lon2 * lat1
    return a / 2.0


def ring_centroid(ring: Ring) -> tuple[float, float]:
    """Area-weighted planar centroid as (lat, lon).

    Falls back to the vertex mean for degenerate rings.
    """
    a = planar_area(ring)
    if abs(a) < DEGENERATE_RING_AREA:
        lats = [p[0] for p in ring[:-1]]
        lons = [p[1] for p in ring[:-1]]
        return (sum(lats) / len(lats), sum(lons) / len(lons))
    cx = cy = 0.0
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        cross = lon1 * lat2 - lon2 * lat1
        cx += (lon1 + lon2) * cross
        cy += (lat1 + lat2) * cross
    return (cy / (6.0 * a), cx / (6.0 * a))


def sphere_ring_area_km2(ring: Ring) -> float:
    """Unsigned spherical area of one ring in km^2.

    Longitude-band decomposition: each edge contributes the band between
    its meridians weighted by the mean sine of its latitudes. Exact for
    rectangles aligned with parallels and meridians.
    """
    total = 0.0
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        dlon = math.radians(lon2 - lon1)
        total += dlon * (2.0 + math.sin(math.radians(lat1)) + math.sin(math.radians(lat2)))
    return abs(total) * EARTH_RADIUS_KM * EARTH_RADIUS_KM / 2.0


def point_in_ring(lat: float, lon: float, ring: Ring) -> bool:
    """Ray-casting containment test for a single ring."""
    inside = False
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        if (lat1 > lat) != (lat2 > lat):
            x = lon1 + (lat - lat1) / (lat2 - lat1) * (lon2 - lon1)
            if lon < x:
                inside = not inside
    return inside


def point_in_rings(lat: float, lon: float, rings: Sequence[Ring]) -> bool:
    """Even-odd containment across all rings (nested rings are holes)."""
    depth = 0
    for ring in rings:
        if point_in_ring(lat, lon, ring):
            depth += 1
    return depth % 2 == 1


def points_in_ring(lats: np.ndarray, lons: np.ndarray, ring: Ring) -> np.ndarray:
    """Vectorized ray casting for many query points against one ring."""
    lats = np.asarray(lats, dtype=float)
    lons = np.asarray(lons, dtype=float)
    inside = np.zeros(lats.shape, dtype=bool)
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        crosses = (lat1 > lats) != (lat2 > lats)
        if not crosses.any():
            continue
        with np.errstate(divide="ignore", invalid="ignore"):
            x = lon1 + (lats - lat1) / (lat2 - lat1) * (lon2 - lon1)
        inside ^= crosses & (lons < x)
    return inside


def _segments_intersect(p1, p2, p3, p4) -> bool:
    """True when open segments p1p2 and p3p4 properly cross or overlap."""

    def orient(a, b, c):
        v = (b[1] - a[1]) * (c[0] - a[0]) - (b[0] - a[0]) * (c[1] - a[1])
        if v > 1e-15:
            return 1
        if v < -1e-15:
            return -1
        return 0

    def on_segment(a, b, c):
        return (
            min(a[0], b[0]) - 1e-15 <= c[0] <= max(a[0], b[0]) + 1e-15
            and min(a[1], b[1]) - 1e-15 <= c[1] <= max(a[1], b[1]) + 1e-15
        )

    o1 = orient(p1, p2, p3)
    o2 = orient(p1, p2, p4)
    o3 = orient(p3, p4, p1)
    o4 = orient(p3, p4, p2)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and on_segment(p1, p2, p3):
        return True
    if o2 == 0 and on_segment(p1, p2, p4):
        return True
    if o3 == 0 and on_segment(p3, p4, p1):
        return True
    if o4 == 0 and on_segment(p3, p4, p2):
        return True
    return False


def ring_is_simple(ring: Ring) -> bool:
    """True when no two non-adjacent edges intersect.

    O(n^2) with a bounding prefilter; rings longer than
    SIMPLICITY_CHECK_MAX_VERTICES are accepted unchecked.
    """
    n = len(ring) - 1
    if n > SIMPLICITY_CHECK_MAX_VERTICES:
        return True
    for i in range(n):
        a1, a2 = ring[i], ring[i + 1]
        for j in range(i + 1, n):
            if j == i or abs(i - j) == 1 or (i == 0 and j == n - 1):
                continue
            b1, b2 = ring[j], ring[j + 1]
            if max(a1[0], a2[0]) < min(b1[0], b2[0]) or max(b1[0], b2[0]) < min(a1[0], a2[0]):
                continue
            if max(a1[1], a2[1]) < min(b1[1], b2[1]) or max(b1[1], b2[1]) < min(a1[1], a2[1]):
                continue
            if _segments_intersect(a1, a2, b1, b2):
                return False
    return True


def ring_is_convex(ring: Ring) -> bool:
    """True when all turns share one sign (collinear runs allowed)."""
    n = len(ring) - 1
    if n < 3:
        return False
    sign = 0
    for i in range(n):
        a, b, c = ring[i], ring[(i + 1) % n], ring[(i + 2) % n]
        cross = (b[1] - a[1]) * (c[0] - a[0]) - (b[0] - a[0]) * (c[1] - a[1])
        if abs(cross) < 1e-15:
            continue
        s = 1 if cross > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def ensure_ccw(ring: Ring) -> list[tuple[float, float]]:
    pts = list(ring)
    if planar_area(pts) < 0:
        pts = pts[::-1]
    return pts


def _dedupe_close(points: list[tuple[float, float]], eps: float = 1e-9) -> list[tuple[float, float]]:
    """Merge consecutive vertices closer than eps; clipping emits such
    pairs when an edge intersection lands on top of a kept vertex."""
    out: list[tuple[float, float]] = []
    for p in points:
        if out and abs(p[0] - out[-1][0]) <= eps and abs(p[1] - out[-1][1]) <= eps:
            continue
        out.append(p)
    while len(out) > 1 and abs(out[0][0] - out[-1][0]) <= eps and abs(out[0][1] - out[-1][1]) <= eps:
        out.pop()
    return out


def clip_ring_by_convex(subject: Ring, clipper: Ring) -> list[tuple[float, float]] | None:
    """Sutherland-Hodgman clip of any subject ring by a convex clipper ring.

    Returns a closed ring or None when the intersection is empty or
    degenerate. Disconnected intersections of concave subjects collapse to
    one ring with bridging edges; callers drop degenerate output.
    """
    clip = ensure_ccw(close_ring(clipper))
    output = list(close_ring(subject)[:-1])
    for (a, b) in zip(clip[:-1], clip[1:]):
        if not output:
            return None
        input_pts = output
        output = []

        def inside(p):
            return (b[1] - a[1]) * (p[0] - a[0]) - (b[0] - a[0]) * (p[1] - a[1]) >= -1e-15

        def intersect(p, q):
            # line a-b with segment p-q, in (x=lon, y=lat)
            x1, y1 = a[1], a[0]
            x2, y2 = b[1], b[0]
            x3, y3 = p[1], p[0]
            x4, y4 = q[1], q[0]
            denom = (x1 - x2) * (y3 - y4) - (y1 - y2) * (x3 - x4)
            if abs(denom) < 1e-30:
                return q
            t = ((x1 - x3) * (y3 - y4) - (y1 - y3) * (x3 - x4)) / denom
            return (y1 + t * (y2 - y1), x1 + t * (x2 - x1))

        prev = input_pts[-1]
        for cur in input_pts:
            if inside(cur):
                if not inside(prev):
                    output.append(intersect(prev, cur))
                output.append(cur)
            elif inside(prev):
                output.append(intersect(prev, cur))
            prev = cur
    output = _dedupe_close(output)
    if len(output) < 3:
        return None
    ring = close_ring(output)
    if distinct_vertices(ring) < 3 or abs(planar_area(ring)) < DEGENERATE_RING_AREA:
        return None
    return ring


def _trace_mask_rings(mask: np.ndarray, lat_edges: np.ndarray, lon_edges: np.ndarray) -> list[list[tuple[float, float]]]:
    """Trace the boundary of a cell mask as closed rectilinear rings.

    Walks the directed boundary edges of the union of filled cell squares
    (filled cell kept on the left), chains them into loops, and collapses
    collinear runs. Corner (r, c) maps to (lat_edges[r], lon_edges[c]).
    """
    rows, cols = mask.shape
    padded = np.zeros((rows + 2, cols + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask
    edges: dict[tuple[int, int], tuple[int, int]] = {}
    for r in range(rows):
        for c in range(cols):
            if not mask[r, c]:
                continue
            pr, pc = r + 1, c + 1
            # corners: (r, c) is the cell's north-west corner
            if not padded[pr - 1, pc]:  # north neighbour empty: west->east
                edges[(r, c)] = (r, c + 1)
            if not padded[pr + 1, pc]:  # south: east->west
                edges[(r + 1, c + 1)] = (r + 1, c)
            if not padded[pr, pc - 1]:  # west: south->north
                edges[(r + 1, c)] = (r, c)
            if not padded[pr, pc + 1]:  # east: north->south
                edges[(r, c + 1)] = (r + 1, c + 1)
    rings: list[list[tuple[float, float]]] = []
    while edges:
        start = next(iter(edges))
        loop = [start]
        cur = edges.pop(start)
        while cur != start:
            loop.append(cur)
            cur = edges.pop(cur)
        loop.append(start)
        # drop collinear corners
        slim: list[tuple[int, int]] = []
        m = len(loop) - 1
        for i in range(m):
            prev, here, nxt = loop[i - 1], loop[i], loop[(i + 1) % m]
            if (prev[0] == here[0] == nxt[0]) or (prev[1] == here[1] == nxt[1]):
                continue
            slim.append(here)
        if len(slim) < 3:
            continue
        slim.append(slim[0])
        rings.append([(float(lat_edges[r]), float(lon_edges[c])) for r, c in slim])
    return rings


def rasterized_intersection(
    rings_a: Sequence[Ring],
    rings_b: Sequence[Ring],
    resolution: int = 256,
) -> list[list[tuple[float, float]]]:
    """Conservative raster-mask intersection for concave ring pairs.

    Cells are kept only when the center and all four corners fall inside
    both regions, so the traced result stays within the true intersection
    for features wider than a cell.
    """
    all_a = [p for ring in rings_a for p in ring]
    all_b = [p for ring in rings_b for p in ring]
    lo_lat = max(min(p[0] for p in all_a), min(p[0] for p in all_b))
    hi_lat = min(max(p[0] for p in all_a), max(p[0] for p in all_b))
    lo_lon = max(min(p[1] for p in all_a), min(p[1] for p in all_b))
    hi_lon = min(max(p[1] for p in all_a), max(p[1] for p in all_b))
    if lo_lat >= hi_lat or lo_lon >= hi_lon:
        return []
    lat_edges = np.linspace(hi_lat, lo_lat, resolution + 1)  # row 0 = north
    lon_edges = np.linspace(lo_lon, hi_lon, resolution + 1)

    def region_mask(rings: Sequence[Ring]) -> np.ndarray:
        corner_lon, corner_lat = np.meshgrid(lon_edges, lat_edges)
        corners = np.zeros(corner_lat.shape, dtype=bool)
        center_lat = (lat_edges[:-1] + lat_edges[1:]) / 2
        center_lon = (lon_edges[:-1] + lon_edges[1:]) / 2
        clon, clat = np.meshgrid(center_lon, center_lat)
        centers = np.zeros(clat.shape, dtype=bool)
        for ring in rings:
            corners ^= points_in_ring(corner_lat.ravel(), corner_lon.ravel(), ring).reshape(corner_lat.shape)
            centers ^= points_in_ring(clat.ravel(), clon.ravel(), ring).reshape(clat.shape)
        four = corners[:-1, :-1] & corners[:-1, 1:] & corners[1:, :-1] & corners[1:, 1:]
        return centers & four

    mask = region_mask(rings_a) & region_mask(rings_b)
    if not mask.any():
        return []
    return _trace_mask_rings(mask, lat_edges, lon_edges)


def hull_of_rings(rings: Sequence[Ring]) -> tuple[float, float, float, float]:
    """Axis-aligned hull as (min_lat, max_lat, min_lon, max_lon)."""
    pts = [p for ring in rings for p in ring]
    if not pts:
        raise ValueError("no vertices")
    lats = [p[0] for p in pts]
    lons = [p[1] for p in pts]
    return (min(lats), max(lats), min(lons), max(lons))
