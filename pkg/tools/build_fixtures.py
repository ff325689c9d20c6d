#!/usr/bin/env python3
"""Synthesize the packaged offline fixture set.

Writes geocoder, weather and elevation records into src/geode/data/fixtures
so the canned queries run fully offline. Field values come from smooth
synthetic functions of position (no noise), every weather observation is
dated 2026-08-20T11:50:00Z and recorded ten minutes later, so replayed
freshness is exactly 600 seconds.

Run from the repository root:  python3 tools/build_fixtures.py
"""

import json
import math
import shutil
import sys
from datetime import datetime, timezone
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from geode.clients.geocoder import GeocoderClient
from geode.clients.sampling import sample_patch
from geode.clients.transport import (
    FixtureStore,
    Transport,
    UpstreamRecord,
    canonical_request,
)
from geode.config import EngineConfig

OUT = ROOT / "src" / "geode" / "data" / "fixtures"
RECORDED_AT = "2026-08-20T12:00:00Z"
OBSERVED_EPOCH = int(datetime(2026, 8, 20, 11, 50, tzinfo=timezone.utc).timestamp())
SEED = 1729
SAMPLES = 48


# ---------------------------------------------------------------------------
# geocoder hits (wire shape: list of hits, strings for lat/lon,
# boundingbox [south, north, west, east], geojson in [lon, lat])

def _poly(*lonlat):
    ring = [list(p) for p in lonlat]
    if ring[0] != ring[-1]:
        ring.append(list(ring[0]))
    return {"type": "Polygon", "coordinates": [ring]}


GEOCODER_HITS = {
    "Qutub Minar": {
        "lat": "28.5245",
        "lon": "77.1855",
        "display_name": "Qutub Minar, Mehrauli, New Delhi, Delhi, India",
        "boundingbox": ["28.5235", "28.5255", "77.1845", "77.1865"],
        "geojson": _poly((77.1845, 28.5235), (77.1865, 28.5235),
                         (77.1865, 28.5255), (77.1845, 28.5255)),
    },
    "Delhi": {
        "lat": "28.6139",
        "lon": "77.2090",
        "display_name": "Delhi, India",
        "boundingbox": ["28.40", "28.88", "76.84", "77.35"],
        "geojson": _poly((76.84, 28.50), (77.10, 28.40), (77.35, 28.51),
                         (77.34, 28.75), (77.08, 28.88), (76.85, 28.78)),
    },
    "Atlanta": {
        "lat": "33.7490",
        "lon": "-84.3880",
        "display_name": "Atlanta, Fulton County, Georgia, United States",
        "boundingbox": ["33.6475", "33.8869", "-84.5510", "-84.2896"],
    },
    "Chicago": {
        "lat": "41.8781",
        "lon": "-87.6298",
        "display_name": "Chicago, Cook County, Illinois, United States",
        "boundingbox": ["41.6443", "42.0230", "-87.9401", "-87.5237"],
    },
    "Telangana": {
        "lat": "17.8495",
        "lon": "79.1151",
        "display_name": "Telangana, India",
        "boundingbox": ["15.81", "19.92", "77.24", "81.32"],
        "geojson": _poly((77.30, 16.20), (78.90, 15.85), (80.30, 16.50),
                         (81.25, 18.20), (80.60, 19.30), (79.20, 19.85),
                         (77.90, 19.10), (77.30, 17.60)),
    },
    "Bangladesh": {
        "lat": "23.6850",
        "lon": "90.3563",
        "display_name": "Bangladesh",
        "boundingbox": ["20.74", "26.63", "88.01", "92.67"],
        "geojson": _poly((88.10, 22.00), (89.50, 21.00), (91.60, 20.80),
                         (92.60, 21.80), (92.40, 24.20), (91.90, 25.20),
                         (90.40, 26.50), (88.60, 26.20), (88.00, 24.50)),
    },
}


# ---------------------------------------------------------------------------
# synthetic fields, one family per region

def delhi_conditions(lat, lon):
    a = math.sin(2.2 * (lat - 28.4))
    b = math.cos(2.5 * (lon - 77.0))
    pm10 = 128.0 + 42.0 * math.sin(2.0 * (lat - 28.4)) + 26.0 * math.cos(2.3 * (lon - 77.0))
    pm2_5 = 0.62 * pm10 + 4.0
    return {
        "humidity": 58.0 + 9.0 * a,
        "precip_mm": 0.3 + 0.2 * b,
        "temp_c": 31.0 + 2.0 * a,
        "air_quality": {
            "co": 820.0 + 140.0 * a * b,
            "no2": 48.0 + 12.0 * b,
            "o3": 30.0 + 9.0 * a,
            "so2": 14.0 + 4.0 * a * b,
            "pm2_5": pm2_5,
            "pm10": pm10,
            "us-epa-index": 3.0 + 0.9 * a + 0.7 * b,
        },
    }


def bangladesh_conditions(lat, lon):
    precip = 7.0 + 4.2 * math.sin(1.2 * (lat - 20.6)) + 2.2 * math.cos(1.0 * (lon - 88.0))
    pm2_5 = 96.0 - 6.2 * precip + 1.5 * math.sin(3.1 * lat) * math.cos(2.7 * lon)
    pm10 = 1.6 * pm2_5 + 8.0
    return {
        "humidity": 74.0 + 1.4 * precip,
        "precip_mm": precip,
        "temp_c": 29.5 - 0.3 * precip,
        "air_quality": {
            "co": 540.0 + 3.0 * pm2_5,
            "no2": 22.0 + 0.2 * pm2_5,
            "o3": 26.0 - 0.08 * pm2_5,
            "so2": 9.0 + 0.05 * pm2_5,
            "pm2_5": pm2_5,
            "pm10": pm10,
            "us-epa-index": 1.0 + pm2_5 / 35.0,
        },
    }


def telangana_precip(lat, lon):
    bump = math.exp(-((lat - 18.55) ** 2 + (lon - 79.35) ** 2) / (2 * 0.75 ** 2))
    return 2.6 + 3.0 * bump + 0.5 * math.sin(1.3 * (lon - 77.2))


def telangana_conditions(lat, lon):
    precip = telangana_precip(lat, lon)
    pm2_5 = 38.0 - 1.5 * precip
    return {
        "humidity": 52.0 + 3.5 * precip,
        "precip_mm": precip,
        "temp_c": 33.0 - 0.8 * precip,
        "air_quality": {
            "co": 450.0 + 2.0 * pm2_5,
            "no2": 18.0 + 0.2 * pm2_5,
            "o3": 32.0 - 0.05 * pm2_5,
            "so2": 7.0 + 0.04 * pm2_5,
            "pm2_5": pm2_5,
            "pm10": 1.6 * pm2_5 + 6.0,
            "us-epa-index": 1.0 + pm2_5 / 35.0,
        },
    }


def telangana_elevation(lat, lon):
    bump = math.exp(-((lat - 18.9) ** 2 + (lon - 79.9) ** 2) / (2 * 0.5 ** 2))
    return 430.0 + 530.0 * bump + 55.0 * math.sin(0.7 * (lat - 15.8))


# fixed observations backing the point-mode lookups
POINT_CONDITIONS = {
    (28.5245, 77.1855): {  # Qutub Minar
        "humidity": 61.0,
        "precip_mm": 0.1,
        "temp_c": 31.4,
        "air_quality": {
            "co": 910.0, "no2": 52.0, "o3": 28.0, "so2": 15.0,
            "pm2_5": 96.2, "pm10": 168.4, "us-epa-index": 4,
        },
    },
    (33.7490, -84.3880): {  # Atlanta
        "humidity": 78.0,
        "precip_mm": 2.4,
        "temp_c": 26.5,
        "air_quality": {
            "co": 310.0, "no2": 14.0, "o3": 41.0, "so2": 3.0,
            "pm2_5": 11.8, "pm10": 19.5, "us-epa-index": 2,
        },
    },
    (41.8781, -87.6298): {  # Chicago
        "humidity": 66.0,
        "precip_mm": 0.8,
        "temp_c": 22.1,
        "air_quality": {
            "co": 280.0, "no2": 17.0, "o3": 35.0, "so2": 2.5,
            "pm2_5": 8.9, "pm10": 15.2, "us-epa-index": 1,
        },
    },
}


def weather_body(lat, lon, fields) -> dict:
    current = {
        "last_updated_epoch": OBSERVED_EPOCH,
        "humidity": round(fields["humidity"], 1),
        "precip_mm": round(fields["precip_mm"], 2),
        "temp_c": round(fields["temp_c"], 1),
        "air_quality": {
            key: (value if isinstance(value, int) else round(value, 2))
            for key, value in fields["air_quality"].items()
        },
    }
    return {
        "location": {"lat": round(lat, 4), "lon": round(lon, 4)},
        "current": current,
    }


def main():
    if OUT.exists():
        shutil.rmtree(OUT)
    store = FixtureStore(OUT)

    def put(client_id, op, params, body):
        canonical = canonical_request(client_id, op, params)
        record = UpstreamRecord(
            client_id=client_id,
            request=canonical,
            body=json.dumps(body).encode("utf-8"),
            recorded_at=RECORDED_AT,
        )
        store.put(record)

    for name, hit in GEOCODER_HITS.items():
        put("geocoder", "search",
            {"q": name, "format": "json", "polygon_geojson": 1, "limit": 1},
            [hit])

    # the sample positions must match what the engine draws, so geocode the
    # regions back through the store we just filled
    config = EngineConfig(net_mode="offline", fixtures_dir=OUT)
    geocoder = GeocoderClient(Transport("offline", store), config.geocoder_base_url)

    def put_weather(lat, lon, fields):
        put("weather", "current",
            {"lat": float(lat), "lon": float(lon), "aqi": "yes"},
            weather_body(lat, lon, fields))

    for (lat, lon), fields in POINT_CONDITIONS.items():
        put_weather(lat, lon, fields)

    region_fields = {
        "Delhi": delhi_conditions,
        "Bangladesh": bangladesh_conditions,
        "Telangana": telangana_conditions,
    }
    positions_by_region = {}
    for region, conditions in region_fields.items():
        patch = geocoder.geocode_patch(region)
        positions = sample_patch(patch, SAMPLES, SEED)
        positions_by_region[region] = positions
        for pos in positions:
            put_weather(pos.lat, pos.lon, conditions(pos.lat, pos.lon))

    telangana = positions_by_region["Telangana"]
    put("elevation", "elevation",
        {"lats": [p.lat for p in telangana], "lons": [p.lon for p in telangana]},
        {"elevation": [round(telangana_elevation(p.lat, p.lon), 1) for p in telangana]})

    count = len(list(OUT.glob("*.json"))) - 1
    print(f"wrote {count} fixture records to {OUT}")


def verify():
    """Replay every canned query against the fresh fixtures."""
    from geode.config import packaged_golden_plans
    from geode.engine import Engine

    engine = Engine(EngineConfig(net_mode="offline", fixtures_dir=OUT))
    queries = json.loads(packaged_golden_plans().read_text())
    for query in queries:
        status, body = engine.handle_query(query)
        if status != 200:
            print(f"FAIL {status} {query!r}: {body.get('error')}")
            continue
        fresh = body["metrics"]["data_freshness_s"]
        print(f"ok   {query!r}\n     -> {body['answer']}  (freshness {fresh})")


if __name__ == "__main__":
    main()
    verify()
