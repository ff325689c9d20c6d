"""The expert registry: typed signatures plus their implementations.

Signatures are pure data usable without any services (prompt assembly,
type checking). Implementations are built per engine against live or
replayed clients via build_impls.
"""

from __future__ import annotations

import dataclasses

from . import analytics
from .clients.sources import AIR_QUALITY_PARAMS, field_source
from .errors import FormatArgError, MissingRasterError, MissingValueError
from .patch import GeoPatch, patch_area
from .plan.interp import ExpertResult
from .plan.types import ANY, BOOL, EnumTy, ExpertSignature, NUMBER, PATCH, Param, TEXT

_MODE_PATCH_POINT = EnumTy(("patch", "point"))


def signatures() -> tuple[ExpertSignature, ...]:
    def field_sig(name, doc):
        return ExpertSignature(
            name,
            (Param("patch", PATCH), Param("mode", _MODE_PATCH_POINT, "patch")),
            PATCH,
            doc,
        )

    return (
        ExpertSignature(
            "point_location_expert",
            (Param("name", TEXT),),
            PATCH,
            "Retrieves the point location of any place on Earth by its name.",
        ),
        ExpertSignature(
            "patch_location_expert",
            (Param("name", TEXT),),
            PATCH,
            "Retrieves the patch location of any place on Earth by its name, including its boundary polygon and bounding box.",
        ),
        ExpertSignature(
            "imputation_expert",
            (Param("patch", PATCH),),
            PATCH,
            "Imputes missing values in the raster data of a patch by nearest neighbour interpolation.",
        ),
        ExpertSignature(
            "correlation_expert",
            (Param("patch1", PATCH), Param("patch2", PATCH)),
            NUMBER,
            "Computes the cross-correlation between the raster data of two patches.",
        ),
        ExpertSignature(
            "data_to_text_expert",
            (Param("data", ANY),),
            TEXT,
            "Computes the string representation for any input data.",
        ),
        ExpertSignature(
            "threshold_expert",
            (
                Param("patch", PATCH),
                Param("threshold", NUMBER),
                Param("mode", EnumTy(("greater", "less")), "greater"),
                Param("relative", BOOL, True),
            ),
            PATCH,
            "Thresholds the raster data within a patch by a relative or absolute cutoff, yielding a binary raster.",
        ),
        ExpertSignature(
            "intersection_expert",
            (
                Param("patch1", PATCH),
                Param("patch2", PATCH),
                Param("mode", EnumTy(("vector", "raster")), "raster"),
            ),
            PATCH,
            "Performs vector or raster intersection of the data within two patches.",
        ),
        field_sig(
            "humidity_expert",
            "Retrieves percent humidity across a patch as raster data, or at its central location based on mode.",
        ),
        field_sig(
            "precipitation_expert",
            "Retrieves precipitation in mm across a patch as raster data, or at its central location based on mode.",
        ),
        field_sig(
            "temperature_expert",
            "Retrieves temperature in Celsius across a patch as raster data, or at its central location based on mode.",
        ),
        ExpertSignature(
            "air_quality_expert",
            (
                Param("patch", PATCH),
                Param("parameter", EnumTy(AIR_QUALITY_PARAMS), "pm2_5"),
                Param("mode", _MODE_PATCH_POINT, "patch"),
            ),
            PATCH,
            "Retrieves an air quality parameter across a patch as raster data, or at its central location based on mode.",
        ),
        field_sig(
            "elevation_expert",
            "Retrieves elevation in metres across a patch as raster data, or at its central location based on mode.",
        ),
        ExpertSignature(
            "elaborate_expert",
            (Param("answer", TEXT),),
            TEXT,
            "Generates an elaborated textual answer from the user query and the computed answer.",
        ),
        ExpertSignature(
            "raster_stats_expert",
            (Param("patch", PATCH), Param("stat", EnumTy(("min", "max", "mean", "std")))),
            NUMBER,
            "Computes a summary statistic over the raster data of a patch.",
        ),
        ExpertSignature(
            "raster_argmax_expert",
            (Param("patch", PATCH),),
            PATCH,
            "Returns a point patch marking the grid cell where the raster data peaks.",
        ),
        ExpertSignature(
            "point_value",
            (Param("patch", PATCH),),
            NUMBER,
            "Returns the numeric value attached to the first data point of a patch.",
        ),
        ExpertSignature(
            "greater",
            (Param("a", NUMBER), Param("b", NUMBER)),
            BOOL,
            "Returns true when a is strictly greater than b.",
        ),
        ExpertSignature(
            "select",
            (Param("c", BOOL), Param("x", ANY), Param("y", ANY)),
            ANY,
            "Returns x when the condition is true, otherwise y.",
        ),
        ExpertSignature(
            "format",
            (Param("template", TEXT),),
            TEXT,
            "Substitutes arguments into {} placeholders in a template string.",
            variadic=True,
        ),
        ExpertSignature(
            "describe",
            (Param("v", ANY),),
            TEXT,
            "Renders any value as a short human readable string.",
        ),
    )


# ---------------------------------------------------------------------------
# value rendering

def render_number(value: float) -> str:
    return format(float(value), ".4g")


def describe_value(value, with_area: bool = False) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return render_number(value)
    if isinstance(value, GeoPatch):
        name = value.name or "patch"
        if with_area:
            area = patch_area(value)
            if area > 0:
                return f"{name} patch ({value.ptype}, area {render_number(area)} million sq km)"
        return f"{name} patch ({value.ptype})"
    if isinstance(value, (list, tuple)):
        return ", ".join(describe_value(v, with_area) for v in value)
    return str(value)


def _format(template: str, *args) -> str:
    parts = template.split("{}")
    if len(parts) - 1 != len(args):
        raise FormatArgError(
            f"template has {len(parts) - 1} placeholders but {len(args)} arguments"
        )
    out = [parts[0]]
    for arg, tail in zip(args, parts[1:]):
        out.append(describe_value(arg))
        out.append(tail)
    return "".join(out)


def _point_value(patch: GeoPatch) -> float:
    for point in patch.vector.points:
        if point.value is not None:
            return point.value
    raise MissingValueError(f"patch {patch.name!r} has no data point with a value")


def _require_raster(patch: GeoPatch):
    if patch.raster is None:
        raise MissingRasterError(f"patch {patch.name!r} has no raster data")
    return patch.raster


# ---------------------------------------------------------------------------
# implementations

def build_impls(*, geocoder, retriever, elaborate=None) -> dict:
    """Bind the registry to services.

    geocoder/retriever: the upstream clients. elaborate: optional callable
    answer -> text; defaults to identity wrapped in a sentence.
    """

    def imputation(patch):
        layer = _require_raster(patch)
        filled = analytics.impute_nearest(layer)
        if filled is layer:
            return patch
        return dataclasses.replace(patch, raster=filled)

    def correlation(p1, p2):
        a = _require_raster(p1)
        b = _require_raster(p2)
        if a.grid.shape != b.grid.shape:
            # resample the coarser grid onto the finer one
            if a.grid.size < b.grid.size:
                a = analytics.resample_nearest(a, b.spec)
            else:
                b = analytics.resample_nearest(b, a.spec)
        return analytics.pearson_correlation(a, b)

    def thresholdf(patch, t, mode, relative):
        layer = analytics.threshold(_require_raster(patch), t, mode, relative)
        return dataclasses.replace(patch, raster=layer)

    def intersection(p1, p2, mode):
        if mode == "vector":
            return analytics.vector_intersection(p1, p2)
        layer = analytics.raster_intersection(_require_raster(p1), _require_raster(p2))
        return GeoPatch(vector=p1.vector, raster=layer)

    def field_impl(field):
        def impl(patch, mode, parameter=None):
            source = field_source(field, parameter)
            result = retriever.retrieve(patch, source, mode)
            return ExpertResult(result.patch, freshness_s=result.freshness_s, partial=result.partial)

        return impl

    humidity = field_impl("humidity")
    precipitation = field_impl("precipitation")
    temperature = field_impl("temperature")
    elevation = field_impl("elevation")
    air_quality = field_impl("air_quality")

    def elaboratef(answer):
        if elaborate is not None:
            return elaborate(answer)
        return f"Answer: {answer}."

    def stats(patch, stat):
        return analytics.raster_stats(_require_raster(patch), stat)

    return {
        "point_location_expert": geocoder.geocode_point,
        "patch_location_expert": geocoder.geocode_patch,
        "imputation_expert": imputation,
        "correlation_expert": correlation,
        "data_to_text_expert": lambda data: describe_value(data, with_area=True),
        "threshold_expert": thresholdf,
        "intersection_expert": intersection,
        "humidity_expert": humidity,
        "precipitation_expert": precipitation,
        "temperature_expert": temperature,
        "elevation_expert": elevation,
        "air_quality_expert": lambda patch, parameter, mode: air_quality(patch, mode, parameter),
        "elaborate_expert": elaboratef,
        "raster_stats_expert": stats,
        "raster_argmax_expert": analytics.raster_argmax,
        "point_value": _point_value,
        "greater": lambda a, b: a > b,
        "select": lambda c, x, y: x if c else y,
        "format": _format,
        "describe": describe_value,
    }
