"""Registration table for retrievable fields.

(field, parameter) determines the raster name, unit label, and colormap.
The air-quality rows follow the upstream parameter naming as-is.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import PlanError
from ..errors import E_ENUM

AIR_QUALITY_PARAMS = ("co", "no2", "o3", "so2", "pm2_5", "pm10", "us-epa-index")

# parameter -> (display name, colormap)
_AIR_TABLE = {
    "co": ("Carbon Monoxide (ug/m3)", "Greys"),
    "no2": ("Nitrogen dioxide (ug/m3)", "Oranges"),
    "o3": ("Ozone (ug/m3)", "Blues"),
    "so2": ("Sulfur Dioxide (ug/m3)", "YlOrBr"),
    "pm2_5": ("PM2.5 (ug/m3)", "magma"),
    "pm10": ("PM10 (ug/m3)", "magma"),
    "us-epa-index": ("US - EPA Index", "magma"),
}

# field -> (display name, unit, colormap)
_FIELD_TABLE = {
    "humidity": ("Humidity (%)", "%", "Blues"),
    "precipitation": ("Precipitation (mm)", "mm", "Blues"),
    "temperature": ("Temperature (Celsius)", "°C", "magma"),
    "elevation": ("Elevation (m)", "m", "gray"),
}


@dataclass(frozen=True)
class FieldSource:
    field: str
    parameter: str | None
    name: str
    unit: str
    colormap: str


def field_source(field: str, parameter: str | None = None) -> FieldSource:
    if field == "air_quality":
        param = parameter or "pm2_5"
        if param not in _AIR_TABLE:
            raise PlanError(
                E_ENUM,
                f"unknown air quality parameter {param!r}, expected one of {list(AIR_QUALITY_PARAMS)}",
            )
        name, colormap = _AIR_TABLE[param]
        unit = "" if param == "us-epa-index" else "µg/m³"
        return FieldSource(field=field, parameter=param, name=name, unit=unit, colormap=colormap)
    if field not in _FIELD_TABLE:
        raise PlanError(E_ENUM, f"unknown field {field!r}, expected one of {sorted(_FIELD_TABLE) + ['air_quality']}")
    name, unit, colormap = _FIELD_TABLE[field]
    return FieldSource(field=field, parameter=None, name=name, unit=unit, colormap=colormap)


def unit_for_name(name: str) -> str:
    """Reverse lookup used for map legends: raster display name -> unit."""
    for field, (fname, unit, _) in _FIELD_TABLE.items():
        if fname == name:
            return unit
    for param, (pname, _) in _AIR_TABLE.items():
        if pname == name:
            return "" if param == "us-epa-index" else "µg/m³"
    return ""
