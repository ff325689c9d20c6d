"""Data model: coordinates, layers, patch derivation, registration, serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geode import serde
from geode.errors import (
    CellIndexError,
    CoordinateRangeError,
    EmptyGeometryError,
    EmptyInputError,
    InvalidRingError,
    OutOfBoundsError,
    RasterTypeError,
    SerdeError,
    ShapeMismatchError,
)
from geode.patch import (
    BBox,
    DataPoint,
    GeoPatch,
    GridSpec,
    LatLon,
    RasterLayer,
    RasterType,
    VectorLayer,
    bbox_of_rings,
    cell_to_latlon,
    get_data_points,
    latlon_to_cell,
    make_point_patch,
    make_region_patch,
    patch_area,
    set_raster_from_points,
)

# frozen area oracles, A = R^2 * dlon_rad * (sin lat_max - sin lat_min), R = 6371
RECT_0101_MKM2 = 0.012363683990261116
POLAR_CAP_MKM2 = 0.03884264481229499
OUTER_MINUS_HOLE_MKM2 = 0.786944576471125
DISJOINT_PAIR_MKM2 = 0.02471607083397276
TRIANGLE_MKM2 = 0.09883416372940629


def square(min_lat, max_lat, min_lon, max_lon):
    return [
        (min_lat, min_lon),
        (min_lat, max_lon),
        (max_lat, max_lon),
        (max_lat, min_lon),
        (min_lat, min_lon),
    ]


# ---------------------------------------------------------------------------
# coordinates

def test_latlon_accepts_range_and_wraps_longitude():
    assert LatLon(45.0, 190.0).lon == pytest.approx(-170.0)
    assert LatLon(0.0, -200.0).lon == pytest.approx(160.0)
    assert LatLon(0.0, 180.0).lon == 180.0  # already in range, left alone
    assert LatLon(0.0, -180.0).lon == -180.0


def test_latlon_rejects_bad_latitude():
    with pytest.raises(CoordinateRangeError):
        LatLon(91.0, 0.0)
    with pytest.raises(CoordinateRangeError):
        LatLon(float("nan"), 0.0)


def test_bbox_validates_ordering():
    with pytest.raises(CoordinateRangeError):
        BBox(1.0, 0.0, 0.0, 1.0)
    with pytest.raises(CoordinateRangeError):
        BBox(0.0, 1.0, 5.0, 2.0)


def test_bbox_serialization_order():
    assert BBox(1.0, 2.0, 3.0, 4.0).as_list() == [1.0, 2.0, 3.0, 4.0]


def test_bbox_longitude_band_may_exceed_180():
    band = BBox(89.0, 90.0, 0.0, 360.0)
    assert band.contains(89.5, 10.0)
    assert band.contains(89.5, -170.0)  # wraps into the band as 190


def test_datapoint_needs_a_name():
    with pytest.raises(EmptyInputError):
        DataPoint(position=LatLon(0, 0), name="")


# ---------------------------------------------------------------------------
# layers

def test_vector_layer_closes_rings_and_checks_hull():
    ring = [(0, 0), (0, 1), (1, 1), (1, 0)]  # not explicitly closed
    layer = VectorLayer(location=LatLon(0.5, 0.5), bbox=BBox(0, 1, 0, 1), boundary=(ring,))
    assert layer.boundary[0][0] == layer.boundary[0][-1]


def test_vector_layer_rejects_wrong_bbox():
    with pytest.raises(InvalidRingError):
        VectorLayer(location=LatLon(0.5, 0.5), bbox=BBox(0, 2, 0, 2), boundary=(square(0, 1, 0, 1),))


def test_vector_layer_rejects_location_outside_bbox():
    with pytest.raises(OutOfBoundsError):
        VectorLayer(location=LatLon(5, 5), bbox=BBox(0, 1, 0, 1))


def test_vector_layer_rejects_degenerate_ring():
    with pytest.raises(InvalidRingError):
        VectorLayer(
            location=LatLon(0, 0),
            bbox=BBox(0, 1, 0, 1),
            boundary=([(0, 0), (1, 1), (0, 0)],),
        )


def test_vector_layer_rejects_self_intersecting_ring():
    bowtie = [(0, 0), (1, 1), (0, 1), (1, 0), (0, 0)]
    with pytest.raises(InvalidRingError):
        VectorLayer(location=LatLon(0.5, 0.5), bbox=BBox(0, 1, 0, 1), boundary=(bowtie,))


def test_raster_layer_is_read_only_float64_with_nan():
    layer = RasterLayer(
        name="t", rtype=RasterType.non_color, grid=[[1, 2], [3, None or float("nan")]], bbox=BBox(0, 1, 0, 1)
    )
    assert layer.grid.dtype == np.float64
    assert not layer.grid.flags.writeable
    assert math.isnan(layer.grid[1, 1])


def test_binary_raster_rejects_other_values():
    with pytest.raises(RasterTypeError):
        RasterLayer(name="m", rtype=RasterType.binary, grid=[[0, 2]], bbox=BBox(0, 1, 0, 1))


def test_binary_raster_allows_missing_cells():
    grid = [[0.0, float("nan")], [1.0, 1.0]]
    layer = RasterLayer(name="m", rtype=RasterType.binary, grid=grid, bbox=BBox(0, 1, 0, 1))
    assert math.isnan(layer.grid[0, 1])


def test_raster_rejects_unknown_colormap_and_empty_grid():
    with pytest.raises(RasterTypeError):
        RasterLayer(name="x", rtype=RasterType.non_color, grid=[[1]], bbox=BBox(0, 1, 0, 1), colormap="plasma9")
    with pytest.raises(EmptyInputError):
        RasterLayer(name="x", rtype=RasterType.non_color, grid=np.zeros((0, 3)), bbox=BBox(0, 1, 0, 1))


def test_raster_equality_treats_nan_as_equal():
    grid = [[1.0, float("nan")]]
    a = RasterLayer(name="x", rtype=RasterType.non_color, grid=grid, bbox=BBox(0, 1, 0, 1))
    b = RasterLayer(name="x", rtype=RasterType.non_color, grid=grid, bbox=BBox(0, 1, 0, 1))
    assert a == b


# ---------------------------------------------------------------------------
# patch derivation

def test_ptype_point_region_field():
    point = make_point_patch(LatLon(0, 0), "Null Island")
    assert point.ptype == "point"
    assert point.vector.bbox.as_list() == [0.0, 0.0, 0.0, 0.0]

    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    assert region.ptype == "region"

    field = set_raster_from_points(region, [(0.5, 0.5, 7.0)], name="f")
    assert field.ptype == "field"


def test_patch_requires_matching_raster_bbox():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    stray = RasterLayer(name="x", rtype=RasterType.non_color, grid=[[1]], bbox=BBox(0, 2, 0, 2))
    with pytest.raises(ShapeMismatchError):
        GeoPatch(vector=region.vector, raster=stray)


def test_patch_name_defaults():
    named = make_point_patch(LatLon(28.5245, 77.1855), "Qutub Minar")
    assert named.name == "Qutub Minar"
    assert named.ptype == "point"

    bare = GeoPatch(vector=VectorLayer(location=LatLon(0, 0), bbox=BBox(0, 1, 0, 1)))
    assert bare.name == "patch"

    field = set_raster_from_points(make_region_patch([square(0, 1, 0, 1)], "unit"), [(0.5, 0.5, 1.0)], name="Humidity (%)")
    assert field.name == "unit"  # explicit region name wins over raster name
    anon = GeoPatch(vector=field.vector, raster=field.raster)
    assert anon.name == "Humidity (%)"


def test_make_point_patch_rejects_bad_latitude():
    with pytest.raises(CoordinateRangeError):
        make_point_patch(LatLon(91, 0), "x")


# ---------------------------------------------------------------------------
# hulls and areas

def test_bbox_of_rings_square():
    assert bbox_of_rings([square(0, 1, 0, 1)]).as_list() == [0.0, 1.0, 0.0, 1.0]


def test_bbox_of_rings_disjoint_union():
    got = bbox_of_rings([square(0, 1, 0, 1), square(2, 3, 2, 3)])
    assert got.as_list() == [0.0, 3.0, 0.0, 3.0]


def test_bbox_of_rings_empty():
    with pytest.raises(EmptyGeometryError):
        bbox_of_rings([])


def test_bbox_of_rings_rotation_invariant():
    ring = square(1, 4, 2, 8)
    rotated = ring[2:-1] + ring[:2] + [ring[2]]
    assert bbox_of_rings([ring]) == bbox_of_rings([rotated])


def test_patch_area_rectangle():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    assert patch_area(region) == pytest.approx(RECT_0101_MKM2, abs=1e-4)
    assert patch_area(region) == pytest.approx(RECT_0101_MKM2, rel=1e-9)


def test_patch_area_from_bbox_rectangle():
    # no boundary: the bbox rectangle stands in
    vec = VectorLayer(location=LatLon(89.5, 100.0), bbox=BBox(89, 90, 0, 360))
    cap = GeoPatch(vector=vec)
    assert patch_area(cap) == pytest.approx(POLAR_CAP_MKM2, rel=1e-9)


def test_patch_area_point_is_zero():
    assert patch_area(make_point_patch(LatLon(10, 10), "p")) == 0.0


def test_patch_area_triangle():
    tri = [(0.0, 0.0), (0.0, 4.0), (4.0, 4.0), (0.0, 0.0)]
    assert patch_area(make_region_patch([tri], "t")) == pytest.approx(TRIANGLE_MKM2, rel=1e-9)


def test_patch_area_hole_subtracts_regardless_of_winding():
    outer = square(0, 10, 0, 10)
    hole = square(2, 8, 2, 8)
    for h in (hole, hole[::-1]):
        region = make_region_patch([outer, h], "donut")
        assert patch_area(region) == pytest.approx(OUTER_MINUS_HOLE_MKM2, rel=1e-9)


def test_patch_area_additive_over_disjoint_rings():
    region = make_region_patch([square(0, 1, 0, 1), square(2, 3, 2, 3)], "pair")
    assert patch_area(region) == pytest.approx(DISJOINT_PAIR_MKM2, rel=1e-9)


# ---------------------------------------------------------------------------
# grid registration

def test_cell_centers_on_2x2():
    spec = GridSpec(2, 2, BBox(0, 1, 0, 1))
    c00 = cell_to_latlon(spec, 0, 0)
    assert (c00.lat, c00.lon) == pytest.approx((0.75, 0.25))
    c11 = cell_to_latlon(spec, 1, 1)
    assert (c11.lat, c11.lon) == pytest.approx((0.25, 0.75))


def test_cell_index_out_of_range():
    spec = GridSpec(2, 2, BBox(0, 1, 0, 1))
    with pytest.raises(CellIndexError):
        cell_to_latlon(spec, 2, 0)
    with pytest.raises(CellIndexError):
        cell_to_latlon(spec, 0, -1)


@given(rows=st.integers(1, 9), cols=st.integers(1, 9))
@settings(max_examples=30, deadline=None)
def test_registration_round_trip_everywhere(rows, cols):
    spec = GridSpec(rows, cols, BBox(12.0, 13.5, -4.0, 2.0))
    for r in range(rows):
        for c in range(cols):
            center = cell_to_latlon(spec, r, c)
            assert latlon_to_cell(spec, center.lat, center.lon) == (r, c)


def test_latlon_to_cell_clamps_outside_bbox():
    spec = GridSpec(4, 4, BBox(0, 1, 0, 1))
    assert latlon_to_cell(spec, 5.0, 5.0) == (0, 3)
    assert latlon_to_cell(spec, -5.0, -5.0) == (3, 0)


# ---------------------------------------------------------------------------
# field fit attachment

def test_set_raster_constant_field():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    field = set_raster_from_points(
        region, [(0.2, 0.2, 7.0), (0.8, 0.3, 7.0), (0.5, 0.9, 7.0)], name="const"
    )
    assert np.abs(field.raster.grid - 7.0).max() < 1e-6
    assert field.raster.rows == 64 and field.raster.cols == 64
    assert field.vector == region.vector


def test_set_raster_interpolates_the_samples():
    # frozen from a dense-solve oracle: predictions at the cell centers
    # nearest to the two samples on the default 64x64 grid
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    field = set_raster_from_points(region, [(0.25, 0.25, 0.0), (0.75, 0.75, 10.0)], name="two")
    assert field.raster.grid[48, 16] == pytest.approx(0.009756357134708793, abs=1e-9)
    assert field.raster.grid[16, 48] == pytest.approx(9.99024434815319, abs=1e-9)
    # both within 1% of the sample values, range 10
    assert abs(field.raster.grid[48, 16] - 0.0) < 0.1
    assert abs(field.raster.grid[16, 48] - 10.0) < 0.1


def test_set_raster_rejects_empty_and_stray_samples():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    with pytest.raises(EmptyInputError):
        set_raster_from_points(region, [], name="x")
    with pytest.raises(OutOfBoundsError):
        set_raster_from_points(region, [(5.0, 5.0, 1.0)], name="x")


def test_get_data_points():
    point = make_point_patch(LatLon(1, 2), "spot")
    assert [p.name for p in get_data_points(point)] == ["spot"]
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    assert get_data_points(region) == []


# ---------------------------------------------------------------------------
# serialization

def test_point_patch_round_trip():
    patch = make_point_patch(LatLon(28.5245, 77.1855), "Qutub Minar")
    doc = serde.patch_to_doc(patch)
    assert doc["vector"]["location"] == [28.5245, 77.1855]
    assert "raster" not in doc
    back = serde.doc_to_patch(doc)
    assert serde.patch_to_doc(back) == doc


def test_field_patch_round_trip_preserves_missing_cells():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    grid = np.array([[1.0, np.nan], [3.0, 4.0]])
    raster = RasterLayer(name="f", rtype=RasterType.non_color, grid=grid, bbox=region.vector.bbox, colormap="Blues")
    patch = GeoPatch(vector=region.vector, raster=raster)
    doc = serde.patch_to_doc(patch)
    assert doc["raster"]["grid"] == [1.0, None, 3.0, 4.0]
    back = serde.doc_to_patch(doc)
    assert back.raster == raster


def test_canonical_dump_is_stable_and_ordered():
    patch = make_point_patch(LatLon(1.5, 2.5), "a")
    doc = serde.patch_to_doc(patch)
    text = serde.dumps_canonical(doc)
    assert text == serde.dumps_canonical(serde.patch_to_doc(serde.doc_to_patch(json.loads(text))))
    vec_keys = list(json.loads(text)["vector"].keys())
    assert vec_keys == ["location", "bbox", "boundary", "points"]


def test_datapoint_value_and_unit_survive():
    dp = DataPoint(position=LatLon(0.5, 0.5), name="m", value=12.5, unit="mm")
    region = make_region_patch([square(0, 1, 0, 1)], "unit", points=[dp])
    back = serde.doc_to_patch(serde.patch_to_doc(region))
    assert back.vector.points[0].value == 12.5
    assert back.vector.points[0].unit == "mm"


def test_malformed_documents_raise():
    with pytest.raises(SerdeError):
        serde.doc_to_patch({})
    with pytest.raises(SerdeError):
        serde.doc_to_patch({"vector": {"location": [0], "bbox": [0, 1, 0, 1], "boundary": [], "points": []}})
    good = serde.patch_to_doc(make_point_patch(LatLon(0, 0), "x"))
    bad = json.loads(json.dumps(good))
    bad["raster"] = {"name": "r", "rtype": "non_color", "rows": 2, "cols": 2, "grid": [1, 2, 3]}
    with pytest.raises(SerdeError):
        serde.doc_to_patch(bad)
    with pytest.raises(SerdeError):
        serde.loads("{not json")


@given(
    lat=st.floats(min_value=-89.9, max_value=89.9, allow_nan=False),
    lon=st.floats(min_value=-179.9, max_value=179.9, allow_nan=False),
)
@settings(max_examples=50, deadline=None)
def test_point_round_trip_any_position(lat, lon):
    patch = make_point_patch(LatLon(lat, lon), "p")
    doc = serde.patch_to_doc(patch)
    assert serde.patch_to_doc(serde.doc_to_patch(doc)) == doc
