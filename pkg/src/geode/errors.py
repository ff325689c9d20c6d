"""Error hierarchy shared by every engine layer.

Each error carries a short stable code so diagnostics can be matched by
machines (planner re-prompting, HTTP mapping, CLI exit codes) without
parsing prose.
"""

from __future__ import annotations


class GeodeError(Exception):
    """Base class for all engine errors."""

    code = "E_GEODE"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def one_line(self) -> str:
        return f"{self.code}: {self.message}"


# ---------------------------------------------------------------------------
# data model / geometry

class CoordinateRangeError(GeodeError):
    code = "E_COORD_RANGE"


class EmptyGeometryError(GeodeError):
    code = "E_EMPTY_GEOMETRY"


class InvalidRingError(GeodeError):
    code = "E_INVALID_RING"


class CellIndexError(GeodeError):
    code = "E_CELL_INDEX"


class EmptyInputError(GeodeError):
    code = "E_EMPTY_INPUT"


class OutOfBoundsError(GeodeError):
    code = "E_OUT_OF_BOUNDS"


class SerdeError(GeodeError):
    code = "E_SERDE"


# ---------------------------------------------------------------------------
# raster analytics

class NumericalFailureError(GeodeError):
    code = "E_NUMERICAL"


class ShapeMismatchError(GeodeError):
    code = "E_SHAPE"


class UndefinedCorrelationError(GeodeError):
    code = "E_UNDEFINED_CORRELATION"


class RasterTypeError(GeodeError):
    code = "E_RASTER_TYPE"


class ThresholdRangeError(GeodeError):
    code = "E_THRESHOLD_RANGE"


class MissingRasterError(GeodeError):
    code = "E_MISSING_RASTER"


class MissingValueError(GeodeError):
    code = "E_MISSING_VALUE"


class FormatArgError(GeodeError):
    code = "E_FORMAT_ARGS"


# ---------------------------------------------------------------------------
# upstream clients

class UpstreamError(GeodeError):
    """Base for failures of the retrieval layer itself (not of the query)."""

    code = "E_UPSTREAM"


class UpstreamUnavailableError(UpstreamError):
    code = "E_UPSTREAM_UNAVAILABLE"


class FixtureMissError(UpstreamError):
    code = "E_FIXTURE_MISS"


class GeocodeNotFoundError(GeodeError):
    code = "E_GEOCODE_NOT_FOUND"


# ---------------------------------------------------------------------------
# plan language

class PlanError(GeodeError):
    """Validation-stage plan failure with a stable code and position.

    Diagnostics are single lines with no stack traces so they can be fed
    back to a planner backend verbatim.
    """

    def __init__(self, code: str, message: str, line: int = 0, col: int = 0):
        super().__init__(message)
        self.code = code
        self.line = line
        self.col = col

    def one_line(self) -> str:
        where = f" line {self.line}" if self.line else ""
        return f"{self.code}{where}: {self.message}"


# stable PlanError codes
E_EXTRACT = "E_EXTRACT"
E_SYNTAX = "E_SYNTAX"
E_BAD_LITERAL = "E_BAD_LITERAL"
E_SSA_REBIND = "E_SSA_REBIND"
E_MISSING_RETURN = "E_MISSING_RETURN"
E_RETURN_ARITY = "E_RETURN_ARITY"
E_RETURN_TYPE = "E_RETURN_TYPE"
E_REF_UNBOUND = "E_REF_UNBOUND"
E_UNKNOWN_EXPERT = "E_UNKNOWN_EXPERT"
E_ARITY = "E_ARITY"
E_TYPE = "E_TYPE"
E_ENUM = "E_ENUM"


class ExpertRuntimeError(GeodeError):
    """An expert call failed while a validated plan was executing."""

    code = "E_EXPERT_RUNTIME"

    def __init__(self, expert: str, line: int, cause: Exception):
        super().__init__(f"{expert} failed at line {line}: {cause}")
        self.expert = expert
        self.line = line
        self.cause = cause

    @property
    def upstream(self) -> bool:
        return isinstance(self.cause, UpstreamError)


# ---------------------------------------------------------------------------
# planner gateway

class BackendUnavailableError(GeodeError):
    code = "E_BACKEND_UNAVAILABLE"


class NoCannedPlanError(GeodeError):
    code = "E_NO_CANNED_PLAN"


class PlanningFailedError(GeodeError):
    code = "E_PLANNING_FAILED"

    def __init__(self, diagnostics: list[str]):
        super().__init__("planning failed after repair: " + " | ".join(diagnostics))
        self.diagnostics = diagnostics
