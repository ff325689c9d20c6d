"""Upstream clients: geocoding, weather, elevation, with record/replay."""

from .elevation import ElevationClient
from .geocoder import GeocoderClient
from .retrieve import FieldRetriever, RetrievalResult
from .sampling import sample_patch
from .sources import AIR_QUALITY_PARAMS, FieldSource, field_source, unit_for_name
from .transport import FixtureStore, Transport, UpstreamRecord, canonical_request, request_key
from .weather import WeatherClient

__all__ = [
    "AIR_QUALITY_PARAMS",
    "ElevationClient",
    "FieldRetriever",
    "FieldSource",
    "FixtureStore",
    "GeocoderClient",
    "RetrievalResult",
    "Transport",
    "UpstreamRecord",
    "WeatherClient",
    "canonical_request",
    "field_source",
    "request_key",
    "sample_patch",
    "unit_for_name",
]
