import json
import math

import numpy as np
import pytest

from geode.analytics import threshold
from geode.patch import (
    BBox,
    LatLon,
    DataPoint,
    GeoPatch,
    RasterLayer,
    RasterType,
    VectorLayer,
    make_point_patch,
    make_region_patch,
)
from geode.visualize import (
    colormap_lut,
    decode_overlay_image,
    patch_features,
    suggested_zoom,
    visualize,
)

SQUARE = [(10.0, 20.0), (10.0, 24.0), (14.0, 24.0), (14.0, 20.0)]


def region(points=()):
    return make_region_patch([SQUARE], "unit square", points=points)


def with_raster(grid, colormap="viridis", name="Precipitation (mm)"):
    base = region()
    raster = RasterLayer(
        name=name,
        rtype=RasterType.non_color,
        grid=np.asarray(grid, dtype=float),
        bbox=base.vector.bbox,
        colormap=colormap,
    )
    return GeoPatch(vector=base.vector, raster=raster, name=base.name)


# ---------------------------------------------------------------------------
# zoom

@pytest.mark.parametrize(
    "span,expected",
    [
        (360.0, 2),
        (180.0, 2),  # floor gives 1, clamped up
        (45.0, 3),
        (5.625, 6),
        (0.1, 11),
        (0.00001, 16),
    ],
)
def test_zoom_fits_span(span, expected):
    bbox = BBox(0.0, span if span <= 90 else 80.0, 0.0, span)
    assert suggested_zoom(bbox) == expected


def test_zoom_point_extent():
    assert suggested_zoom(BBox(5.0, 5.0, 9.0, 9.0)) == 16


# ---------------------------------------------------------------------------
# features

def test_point_patch_single_feature():
    patch = make_point_patch(LatLon(28.6139, 77.209), "Delhi")
    art = visualize(patch)
    features = art["geojson"]["features"]
    assert len(features) == 1
    geom = features[0]["geometry"]
    assert geom["type"] == "Point"
    assert geom["coordinates"] == [77.209, 28.6139]  # lon first on the wire
    assert features[0]["properties"]["name"] == "Delhi"
    assert "overlay" not in art
    assert art["center"] == [28.6139, 77.209]
    assert art["zoom"] == 16


def test_region_polygon_closed_and_lonlat():
    art = visualize(region())
    feature = art["geojson"]["features"][0]
    assert feature["type"] == "Feature"
    geom = feature["geometry"]
    assert geom["type"] == "Polygon"
    (ring,) = geom["coordinates"]
    assert ring[0] == ring[-1]
    assert [20.0, 10.0] in ring  # (lat 10, lon 20) flipped
    assert feature["properties"]["name"] == "unit square"


def test_marker_properties():
    marker = DataPoint(LatLon(12.0, 22.0), "Precipitation (mm)", 2.4, "mm")
    art = visualize(region(points=(marker,)))
    points = [f for f in art["geojson"]["features"] if f["geometry"]["type"] == "Point"]
    assert len(points) == 1
    assert points[0]["properties"] == {
        "name": "Precipitation (mm)",
        "value": 2.4,
        "unit": "mm",
    }


def test_hole_becomes_inner_ring():
    outer = SQUARE
    hole = [(11.0, 21.0), (11.0, 22.0), (12.0, 22.0), (12.0, 21.0)]
    patch = make_region_patch([outer, hole], "donut")
    (feature,) = patch_features(patch)
    geom = feature["geometry"]
    assert geom["type"] == "Polygon"
    assert len(geom["coordinates"]) == 2


def test_disjoint_rings_become_multipolygon():
    second = [(30.0, 40.0), (30.0, 42.0), (32.0, 42.0), (32.0, 40.0)]
    patch = make_region_patch([SQUARE, second], "pair")
    (feature,) = patch_features(patch)
    geom = feature["geometry"]
    assert geom["type"] == "MultiPolygon"
    assert len(geom["coordinates"]) == 2
    assert all(len(poly) == 1 for poly in geom["coordinates"])


# ---------------------------------------------------------------------------
# overlay

def test_overlay_shape_bounds_legend():
    rows = np.linspace(0.0, 5.0, 64)
    grid = np.tile(rows[:, None], (1, 64))
    patch = with_raster(grid, colormap="Blues")
    art = visualize(patch)
    overlay = art["overlay"]
    image = decode_overlay_image(overlay["image"])
    assert image.shape == (64, 64, 4)
    assert overlay["bounds"] == patch.vector.bbox.as_list()
    legend = overlay["legend"]
    assert legend == {
        "name": "Precipitation (mm)",
        "unit": "mm",
        "min": 0.0,
        "max": 5.0,
        "colormap": "Blues",
    }
    assert legend["min"] < legend["max"]


def test_overlay_gradient_uses_lut_ends():
    grid = np.tile(np.linspace(0.0, 1.0, 64), (64, 1))
    art = visualize(with_raster(grid, colormap="viridis"))
    image = decode_overlay_image(art["overlay"]["image"])
    lut = colormap_lut("viridis")
    assert list(image[0, 0, :3]) == list(lut[0])
    assert list(image[0, -1, :3]) == list(lut[255])
    assert image[..., 3].min() == 255  # nothing missing, fully opaque


def test_overlay_missing_cells_transparent():
    grid = np.ones((8, 8))
    grid[2, 3] = np.nan
    grid[0, 0] = 0.0
    art = visualize(with_raster(grid))
    image = decode_overlay_image(art["overlay"]["image"])
    assert image[2, 3, 3] == 0
    assert image[0, 0, 3] == 255
    opaque = image[..., 3] == 255
    assert int(opaque.sum()) == 63


def test_binary_overlay_two_colors():
    grid = np.asarray([[0.0, 1.0, np.nan], [1.0, 0.0, 1.0]])
    vec = region().vector
    layer = RasterLayer("mask", RasterType.binary, grid, vec.bbox,
                        colormap="viridis")
    art = visualize(GeoPatch(vector=vec, raster=layer, name="mask"))
    image = decode_overlay_image(art["overlay"]["image"])
    colors = {tuple(px) for px in image.reshape(-1, 4) if px[3] == 255}
    lut = colormap_lut("viridis")
    assert colors == {(*lut[0], 255), (*lut[255], 255)}


def test_constant_raster_min_equals_max():
    art = visualize(with_raster(np.full((4, 4), 7.5)))
    legend = art["overlay"]["legend"]
    assert legend["min"] == legend["max"] == 7.5
    image = decode_overlay_image(art["overlay"]["image"])
    assert (image[..., 3] == 255).all()
    assert len({tuple(px) for px in image.reshape(-1, 4)}) == 1


def test_all_missing_raster_fully_transparent():
    art = visualize(with_raster(np.full((4, 4), np.nan)))
    overlay = art["overlay"]
    assert overlay["legend"]["min"] is None
    assert overlay["legend"]["max"] is None
    image = decode_overlay_image(overlay["image"])
    assert (image[..., 3] == 0).all()


def test_unknown_colormap_falls_back_to_gray():
    base = region()
    raster = RasterLayer("field", RasterType.non_color, np.zeros((2, 2)),
                         base.vector.bbox, colormap=None)
    art = visualize(GeoPatch(vector=base.vector, raster=raster, name="f"))
    assert art["overlay"]["legend"]["colormap"] == "gray"


def test_threshold_raster_renders_binary():
    rows = np.linspace(0.0, 10.0, 16)
    patch = with_raster(np.tile(rows[:, None], (1, 16)), colormap="magma")
    cut = GeoPatch(vector=patch.vector,
                   raster=threshold(patch.raster, 0.5, "greater", True),
                   name=patch.name)
    art = visualize(cut)
    image = decode_overlay_image(art["overlay"]["image"])
    colors = {tuple(px[:3]) for px in image.reshape(-1, 4)}
    assert len(colors) == 2


# ---------------------------------------------------------------------------
# whole artifact

def test_artifact_serializes_and_repeats():
    marker = DataPoint(LatLon(11.0, 21.0), "spot", 1.0, "m")
    grid = np.tile(np.linspace(3.0, 9.0, 32), (32, 1))
    base = region(points=(marker,))
    raster = RasterLayer("Elevation (m)", RasterType.non_color, grid,
                         base.vector.bbox, colormap="gray")
    patch = GeoPatch(vector=base.vector, raster=raster, name="unit square")

    first = json.dumps(visualize(patch), sort_keys=True)
    second = json.dumps(visualize(patch), sort_keys=True)
    assert first == second

    art = json.loads(first)
    assert art["geojson"]["type"] == "FeatureCollection"
    kinds = [f["geometry"]["type"] for f in art["geojson"]["features"]]
    assert kinds == ["Polygon", "Point"]
    assert art["overlay"]["legend"]["unit"] == "m"
    assert art["zoom"] == suggested_zoom(patch.vector.bbox)
