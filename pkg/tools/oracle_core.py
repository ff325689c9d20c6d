"""Freeze expected values for the core-model tests.

Independent math only: nothing here imports the package. Run once, paste
the printed constants into tests.
"""

import math

R = 6371.0

# --- rectangle areas, band formula A = R^2 * dlon_rad * (sin lat_max - sin lat_min)

def rect_area_mkm2(min_lat, max_lat, min_lon, max_lon):
    dlon = math.radians(max_lon - min_lon)
    return R * R * dlon * (math.sin(math.radians(max_lat)) - math.sin(math.radians(min_lat))) / 1e6


print("rect [0,1,0,1]      :", repr(rect_area_mkm2(0, 1, 0, 1)))
print("polar cap [89,90,0,360]:", repr(rect_area_mkm2(89, 90, 0, 360)))
print("delhi-ish [28,29,76,78]:", repr(rect_area_mkm2(28, 29, 76, 78)))

# hole case: outer [0,10,0,10] minus inner [2,8,2,8]
outer = rect_area_mkm2(0, 10, 0, 10)
inner = rect_area_mkm2(2, 8, 2, 8)
print("outer-minus-hole    :", repr(outer - inner))

# disjoint: [0,1,0,1] plus [2,3,2,3]
print("disjoint pair       :", repr(rect_area_mkm2(0, 1, 0, 1) + rect_area_mkm2(2, 3, 2, 3)))

# --- triangle area oracle via the longitude-band edge sum, done by hand here
def band_ring_area_mkm2(ring):
    total = 0.0
    for (lat1, lon1), (lat2, lon2) in zip(ring[:-1], ring[1:]):
        total += math.radians(lon2 - lon1) * (
            2.0 + math.sin(math.radians(lat1)) + math.sin(math.radians(lat2))
        )
    return abs(total) * R * R / 2.0 / 1e6


tri = [(0.0, 0.0), (0.0, 4.0), (4.0, 4.0), (0.0, 0.0)]
print("triangle            :", repr(band_ring_area_mkm2(tri)))

# --- grid registration spot values
def cell_center(rows, cols, bbox, row, col):
    min_lat, max_lat, min_lon, max_lon = bbox
    dlat = (max_lat - min_lat) / rows
    dlon = (max_lon - min_lon) / cols
    return (max_lat - (row + 0.5) * dlat, min_lon + (col + 0.5) * dlon)


print("2x2 cell (0,0)      :", cell_center(2, 2, (0, 1, 0, 1), 0, 0))
print("2x2 cell (1,1)      :", cell_center(2, 2, (0, 1, 0, 1), 1, 1))
print("64x64 cell (48,16)  :", cell_center(64, 64, (0, 1, 0, 1), 48, 16))
