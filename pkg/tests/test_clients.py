"""Upstream clients: canonical keys, record/replay, geocoding, weather,
elevation, sampling, and field retrieval."""

import json
import math
from datetime import datetime, timezone

import numpy as np
import pytest

from geode import geometry, serde
from geode.clients import (
    ElevationClient,
    FieldRetriever,
    FixtureStore,
    GeocoderClient,
    Transport,
    UpstreamRecord,
    WeatherClient,
    canonical_request,
    field_source,
    request_key,
    sample_patch,
    unit_for_name,
)
from geode.config import EngineConfig
from geode.errors import (
    EmptyGeometryError,
    EmptyInputError,
    FixtureMissError,
    GeocodeNotFoundError,
    PlanError,
    UpstreamUnavailableError,
)
from geode.patch import BBox, GeoPatch, LatLon, VectorLayer, make_point_patch, make_region_patch

RECORDED_AT = "2026-08-20T12:00:00Z"
OBSERVED_EPOCH = int(datetime(2026, 8, 20, 11, 50, tzinfo=timezone.utc).timestamp())


def square(min_lat, max_lat, min_lon, max_lon):
    return [
        (min_lat, min_lon),
        (min_lat, max_lon),
        (max_lat, max_lon),
        (max_lat, min_lon),
        (min_lat, min_lon),
    ]


def weather_body(humidity=50.0, precip=1.0, temp=25.0, air=None, epoch=OBSERVED_EPOCH):
    current = {
        "last_updated_epoch": epoch,
        "temp_c": temp,
        "humidity": humidity,
        "precip_mm": precip,
        "air_quality": air
        or {"co": 200.0, "no2": 10.0, "o3": 30.0, "so2": 5.0, "pm2_5": 12.0, "pm10": 20.0, "us-epa-index": 2},
    }
    return json.dumps({"current": current})


def put_weather(store, lat, lon, body, recorded_at=RECORDED_AT):
    canonical = canonical_request("weather", "current", {"lat": float(lat), "lon": float(lon), "aqi": "yes"})
    store.put(UpstreamRecord("weather", canonical, body.encode(), recorded_at))


def put_geocode(store, name, hits):
    params = {"q": name, "format": "json", "polygon_geojson": 1, "limit": 1}
    canonical = canonical_request("geocoder", "search", params)
    store.put(UpstreamRecord("geocoder", canonical, json.dumps(hits).encode(), RECORDED_AT))


def put_elevation(store, lats, lons, values):
    params = {"lats": [float(v) for v in lats], "lons": [float(v) for v in lons]}
    canonical = canonical_request("elevation", "elevation", params)
    store.put(UpstreamRecord("elevation", canonical, json.dumps({"elevation": values}).encode(), RECORDED_AT))


def offline(store):
    return Transport("offline", store)


# ---------------------------------------------------------------------------
# canonical requests and the store

def test_canonical_request_is_sorted_and_rounded():
    got = canonical_request("weather", "current", {"lon": 77.18551234999, "lat": 28.5, "aqi": "yes"})
    assert got == "weather|current|aqi=yes&lat=28.500000&lon=77.185512"
    assert canonical_request("e", "b", {"xs": [1.0, 2.0]}) == "e|b|xs=1.000000,2.000000"
    assert len(request_key(got)) == 64


def test_store_round_trip_and_index(tmp_path):
    store = FixtureStore(tmp_path)
    rec = UpstreamRecord("weather", "weather|current|x=1", b'{"a": 1}', RECORDED_AT)
    store.put(rec)
    back = store.get("weather|current|x=1")
    assert back.body == rec.body
    assert back.recorded_at == RECORDED_AT
    index = json.loads((tmp_path / "index.json").read_text())
    assert index["records"][0]["client"] == "weather"
    assert index["records"][0]["key"] == request_key("weather|current|x=1")


def test_store_keeps_latest_record_per_key(tmp_path):
    store = FixtureStore(tmp_path)
    store.put(UpstreamRecord("weather", "k", b"old", "2026-08-20T10:00:00Z"))
    store.put(UpstreamRecord("weather", "k", b"new", "2026-08-20T11:00:00Z"))
    assert store.get("k").body == b"new"
    index = json.loads((tmp_path / "index.json").read_text())
    assert len(index["records"]) == 1


def test_offline_miss_names_the_request(tmp_path):
    transport = offline(FixtureStore(tmp_path))
    with pytest.raises(FixtureMissError) as err:
        transport.exchange("weather", "current", {"lat": 1.0}, lambda: "{}")
    assert "weather|current|lat=1.000000" in str(err.value)


def test_record_then_replay_is_byte_identical(tmp_path):
    store = FixtureStore(tmp_path)
    recorder = Transport("record", store)
    got = recorder.exchange("geocoder", "search", {"q": "x"}, lambda: '{"v": 1}')
    replayed = offline(store).exchange("geocoder", "search", {"q": "x"}, lambda: pytest.fail("fetched"))
    assert replayed.body == got.body == b'{"v": 1}'


def test_live_fetch_failure_wraps(tmp_path):
    def boom():
        raise OSError("connection refused")

    transport = Transport("live", None)
    with pytest.raises(UpstreamUnavailableError):
        transport.exchange("weather", "current", {}, boom)


# ---------------------------------------------------------------------------
# geocoder

def delhi_hit():
    ring = [[77.0, 28.4], [77.4, 28.4], [77.4, 28.9], [77.0, 28.9], [77.0, 28.4]]  # lon, lat
    return {
        "lat": "28.6139",
        "lon": "77.2090",
        "display_name": "Delhi, India",
        "boundingbox": ["28.4", "28.9", "77.0", "77.4"],
        "geojson": {"type": "Polygon", "coordinates": [ring]},
    }


def test_geocode_point(tmp_path):
    store = FixtureStore(tmp_path)
    put_geocode(store, "Delhi", [delhi_hit()])
    client = GeocoderClient(offline(store), "https://geocoder.test")
    patch = client.geocode_point("Delhi")
    assert patch.ptype == "point"
    assert patch.vector.location.lat == pytest.approx(28.6139)
    assert patch.vector.points[0].name == "Delhi, India"


def test_geocode_patch_flips_geojson_axes(tmp_path):
    store = FixtureStore(tmp_path)
    put_geocode(store, "Delhi", [delhi_hit()])
    client = GeocoderClient(offline(store), "https://geocoder.test")
    patch = client.geocode_patch("Delhi")
    assert patch.ptype == "region"
    ring = patch.vector.boundary[0]
    assert (28.4, 77.0) in ring  # (lat, lon) order after the flip
    assert patch.vector.bbox.as_list() == [28.4, 28.9, 77.0, 77.4]
    assert patch.name == "Delhi, India"


def test_geocode_patch_falls_back_to_bounding_box(tmp_path):
    hit = delhi_hit()
    del hit["geojson"]
    store = FixtureStore(tmp_path)
    put_geocode(store, "Delhi", [hit])
    patch = GeocoderClient(offline(store), "x").geocode_patch("Delhi")
    assert patch.ptype == "region"
    assert geometry.planar_area(patch.vector.boundary[0]) != 0


def test_geocode_no_hits(tmp_path):
    store = FixtureStore(tmp_path)
    put_geocode(store, "zzqx-no-such-place-9817", [])
    client = GeocoderClient(offline(store), "x")
    with pytest.raises(GeocodeNotFoundError):
        client.geocode_point("zzqx-no-such-place-9817")
    with pytest.raises(GeocodeNotFoundError):
        client.geocode_patch("zzqx-no-such-place-9817")


def test_geocode_empty_name_is_a_precondition_error(tmp_path):
    client = GeocoderClient(offline(FixtureStore(tmp_path)), "x")
    with pytest.raises(EmptyInputError):
        client.geocode_point("")
    with pytest.raises(EmptyInputError):
        client.geocode_patch("   ")


def test_geocode_invalid_json(tmp_path):
    store = FixtureStore(tmp_path)
    params = {"q": "X", "format": "json", "polygon_geojson": 1, "limit": 1}
    canonical = canonical_request("geocoder", "search", params)
    store.put(UpstreamRecord("geocoder", canonical, b"<html>err</html>", RECORDED_AT))
    with pytest.raises(UpstreamUnavailableError):
        GeocoderClient(offline(store), "x").geocode_point("X")


def test_replay_is_deterministic(tmp_path):
    store = FixtureStore(tmp_path)
    put_geocode(store, "Delhi", [delhi_hit()])
    client = GeocoderClient(offline(store), "x")
    first = serde.dumps_canonical(serde.patch_to_doc(client.geocode_patch("Delhi")))
    second = serde.dumps_canonical(serde.patch_to_doc(client.geocode_patch("Delhi")))
    assert first == second


# ---------------------------------------------------------------------------
# weather

def test_weather_current_parses_and_dates(tmp_path):
    store = FixtureStore(tmp_path)
    put_weather(store, 28.6139, 77.209, weather_body(humidity=61.0, precip=0.4, temp=31.5))
    client = WeatherClient(offline(store), "https://weather.test")
    cond = client.current(28.6139, 77.209)
    assert cond.humidity == 61.0
    assert cond.precip_mm == 0.4
    assert cond.temp_c == 31.5
    assert cond.air_quality["us-epa-index"] == 2
    # recorded at 12:00, observed at 11:50 -> 600 seconds stale
    assert cond.retrieved_epoch - cond.observed_epoch == pytest.approx(600.0)


def test_weather_value_for_fields(tmp_path):
    store = FixtureStore(tmp_path)
    put_weather(store, 0.0, 0.0, weather_body(humidity=70.0, precip=2.5, temp=18.0))
    client = WeatherClient(offline(store), "x")
    cond = client.current(0.0, 0.0)
    assert client.value_for(cond, "humidity", None) == 70.0
    assert client.value_for(cond, "precipitation", None) == 2.5
    assert client.value_for(cond, "temperature", None) == 18.0
    assert client.value_for(cond, "air_quality", "pm2_5") == 12.0
    with pytest.raises(UpstreamUnavailableError):
        client.value_for(cond, "air_quality", "pm99")


def test_weather_malformed_body(tmp_path):
    store = FixtureStore(tmp_path)
    put_weather(store, 0.0, 0.0, '{"nope": true}')
    with pytest.raises(UpstreamUnavailableError):
        WeatherClient(offline(store), "x").current(0.0, 0.0)


# ---------------------------------------------------------------------------
# elevation

def test_elevation_batch(tmp_path):
    store = FixtureStore(tmp_path)
    put_elevation(store, [10.0, 11.0, 12.0], [20.0, 21.0, 22.0], [100.0, 200.0, 300.0])
    client = ElevationClient(offline(store), "x")
    got = client.elevations([(10.0, 20.0), (11.0, 21.0), (12.0, 22.0)])
    assert got == [100.0, 200.0, 300.0]


def test_elevation_count_mismatch(tmp_path):
    store = FixtureStore(tmp_path)
    put_elevation(store, [10.0], [20.0], [1.0, 2.0])
    with pytest.raises(UpstreamUnavailableError):
        ElevationClient(offline(store), "x").elevations([(10.0, 20.0)])


def test_elevation_batches_of_100(tmp_path):
    calls = []

    class SpyTransport(Transport):
        def exchange(self, client_id, op, params, fetch):
            calls.append(len(params["lats"]))
            body = json.dumps({"elevation": [1.0] * len(params["lats"])})
            return UpstreamRecord(client_id, "x", body.encode(), RECORDED_AT)

    client = ElevationClient(SpyTransport("live", None), "x")
    got = client.elevations([(float(i % 90), 0.0) for i in range(250)])
    assert len(got) == 250
    assert calls == [100, 100, 50]


# ---------------------------------------------------------------------------
# field source table

def test_field_source_table():
    assert field_source("humidity").name == "Humidity (%)"
    assert field_source("humidity").unit == "%"
    assert field_source("precipitation").colormap == "Blues"
    assert field_source("temperature").unit == "°C"
    assert field_source("elevation").colormap == "gray"
    aq = field_source("air_quality", "co")
    assert (aq.name, aq.colormap, aq.unit) == ("Carbon Monoxide (ug/m3)", "Greys", "µg/m³")
    epa = field_source("air_quality", "us-epa-index")
    assert (epa.name, epa.unit, epa.colormap) == ("US - EPA Index", "", "magma")
    assert field_source("air_quality").parameter == "pm2_5"
    with pytest.raises(PlanError):
        field_source("air_quality", "pm99")
    with pytest.raises(PlanError):
        field_source("wind")


def test_unit_reverse_lookup():
    assert unit_for_name("Humidity (%)") == "%"
    assert unit_for_name("PM2.5 (ug/m3)") == "µg/m³"
    assert unit_for_name("US - EPA Index") == ""
    assert unit_for_name("Something Else") == ""


# ---------------------------------------------------------------------------
# sampling

def test_sampling_is_deterministic():
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    a = sample_patch(region, 5, seed=42)
    b = sample_patch(region, 5, seed=42)
    assert [(p.lat, p.lon) for p in a] == [(p.lat, p.lon) for p in b]
    c = sample_patch(region, 5, seed=43)
    assert [(p.lat, p.lon) for p in a] != [(p.lat, p.lon) for p in c]


def test_sampling_point_patch_repeats_location():
    point = make_point_patch(LatLon(3.5, 7.25), "spot")
    got = sample_patch(point, 4, seed=1)
    assert [(p.lat, p.lon) for p in got] == [(3.5, 7.25)] * 4


def test_sampling_respects_boundary():
    tri = [(0.0, 0.0), (0.0, 4.0), (4.0, 4.0), (0.0, 0.0)]
    region = make_region_patch([tri], "tri")
    pts = sample_patch(region, 48, seed=1729)
    assert len(pts) == 48
    for p in pts:
        assert geometry.point_in_ring(p.lat, p.lon, region.vector.boundary[0])


def test_sampling_depends_only_on_geometry_and_seed():
    a = make_region_patch([square(0, 1, 0, 1)], "name one")
    b = make_region_patch(
        [square(0, 1, 0, 1)],
        "another name",
        points=[__import__("geode.patch", fromlist=["DataPoint"]).DataPoint(position=LatLon(0.5, 0.5), name="m")],
    )
    pa = sample_patch(a, 6, seed=9)
    pb = sample_patch(b, 6, seed=9)
    assert [(p.lat, p.lon) for p in pa] == [(p.lat, p.lon) for p in pb]


def test_sampling_falls_back_when_boundary_is_tiny(caplog):
    # sliver occupying ~0.005% of its bbox: the cap trips, bbox fills in
    sliver = [(0.0, 0.0), (0.0001, 1.0), (0.0002, 1.0), (0.0001, 0.0), (0.0, 0.0)]
    bbox_stretcher = [(0.9999, 0.0), (1.0, 0.0001), (0.9999, 0.0002), (0.9999, 0.0)]
    region = make_region_patch([sliver, bbox_stretcher], "sliver")
    with caplog.at_level("WARNING"):
        pts = sample_patch(region, 40, seed=7)
    assert len(pts) == 40
    assert any("filling" in rec.message for rec in caplog.records)


# ---------------------------------------------------------------------------
# retrieval

def config_with(tmp_path, **kw):
    kw.setdefault("fixtures_dir", tmp_path)
    kw.setdefault("sample_count", 8)
    return EngineConfig(**kw)


def retriever(tmp_path, config):
    store = FixtureStore(tmp_path)
    transport = offline(store)
    return (
        FieldRetriever(
            WeatherClient(transport, "x"),
            ElevationClient(transport, "x"),
            config,
        ),
        store,
    )


def test_point_mode_replaces_markers(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    put_weather(store, 33.749, -84.388, weather_body(precip=2.4))
    patch = make_point_patch(LatLon(33.749, -84.388), "Atlanta")
    result = ret.retrieve(patch, field_source("precipitation"), "point")
    points = result.patch.vector.points
    assert len(points) == 1
    assert points[0].name == "Precipitation (mm)"
    assert points[0].value == 2.4
    assert points[0].unit == "mm"
    assert result.freshness_s == pytest.approx(600.0)
    assert result.patch.name == "Atlanta"


def test_point_mode_elevation(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    put_elevation(store, [18.9], [79.9], [959.5])
    patch = make_point_patch(LatLon(18.9, 79.9), "peak")
    result = ret.retrieve(patch, field_source("elevation"), "point")
    assert result.patch.vector.points[0].value == 959.5
    assert result.patch.vector.points[0].unit == "m"
    assert result.freshness_s is None


def test_patch_mode_constant_field(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    for pos in sample_patch(region, config.sample_count, config.seed):
        put_weather(store, pos.lat, pos.lon, weather_body(humidity=55.5))
    result = ret.retrieve(region, field_source("humidity"), "patch")
    raster = result.patch.raster
    assert raster is not None
    assert np.abs(raster.grid - 55.5).max() < 1e-6
    assert raster.name == "Humidity (%)"
    assert raster.colormap == "Blues"
    assert not np.isnan(raster.grid).any()
    assert result.freshness_s == pytest.approx(600.0)
    assert result.partial is False


def test_patch_mode_tolerates_quarter_missing(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    positions = sample_patch(region, config.sample_count, config.seed)
    for pos in positions[2:]:  # drop 2 of 8: 75% succeed
        put_weather(store, pos.lat, pos.lon, weather_body(humidity=40.0))
    result = ret.retrieve(region, field_source("humidity"), "patch")
    assert result.partial is True
    assert np.abs(result.patch.raster.grid - 40.0).max() < 1e-6


def test_patch_mode_fails_below_threshold(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    positions = sample_patch(region, config.sample_count, config.seed)
    for pos in positions[3:]:  # only 5 of 8 present
        put_weather(store, pos.lat, pos.lon, weather_body())
    with pytest.raises(UpstreamUnavailableError):
        ret.retrieve(region, field_source("humidity"), "patch")


def test_patch_mode_elevation_batches(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    positions = sample_patch(region, config.sample_count, config.seed)
    put_elevation(
        store,
        [p.lat for p in positions],
        [p.lon for p in positions],
        [100.0] * len(positions),
    )
    result = ret.retrieve(region, field_source("elevation"), "patch")
    assert np.abs(result.patch.raster.grid - 100.0).max() < 1e-6
    assert result.freshness_s is None


def test_patch_mode_needs_extent(tmp_path):
    config = config_with(tmp_path)
    ret, _ = retriever(tmp_path, config)
    point = make_point_patch(LatLon(0, 0), "dot")
    with pytest.raises(EmptyGeometryError):
        ret.retrieve(point, field_source("humidity"), "patch")


def test_patch_mode_freshness_is_oldest(tmp_path):
    config = config_with(tmp_path)
    ret, store = retriever(tmp_path, config)
    region = make_region_patch([square(0, 1, 0, 1)], "unit")
    positions = sample_patch(region, config.sample_count, config.seed)
    stale = OBSERVED_EPOCH - 1800  # one sample observed half an hour earlier
    for i, pos in enumerate(positions):
        epoch = stale if i == 3 else OBSERVED_EPOCH
        put_weather(store, pos.lat, pos.lon, weather_body(epoch=epoch))
    result = ret.retrieve(region, field_source("humidity"), "patch")
    assert result.freshness_s == pytest.approx(600.0 + 1800.0)
