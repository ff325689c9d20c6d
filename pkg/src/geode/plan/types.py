"""Semantic types and the expert signature table shape."""

from __future__ import annotations

from dataclasses import dataclass

TEXT = "Text"
NUMBER = "Number"
BOOL = "Bool"
PATCH = "Patch"
ANY = "Any"


@dataclass(frozen=True)
class EnumTy:
    """A string parameter restricted to a fixed set of values."""

    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("enum type needs at least one value")


def type_name(ty) -> str:
    if isinstance(ty, EnumTy):
        return "enum[" + ", ".join(repr(v) for v in ty.values) + "]"
    return ty


REQUIRED = object()


@dataclass(frozen=True)
class Param:
    name: str
    ty: object
    default: object = REQUIRED

    @property
    def required(self) -> bool:
        return self.default is REQUIRED


@dataclass(frozen=True)
class ExpertSignature:
    name: str
    params: tuple
    returns: object
    doc: str
    variadic: bool = False  # extra positional Any arguments after the declared params

    def render(self) -> str:
        parts = []
        for p in self.params:
            piece = f"{p.name}: {type_name(p.ty)}"
            if not p.required:
                if isinstance(p.default, bool):
                    piece += " = " + ("true" if p.default else "false")
                elif isinstance(p.default, str):
                    piece += f" = {p.default!r}"
                else:
                    piece += f" = {p.default}"
            parts.append(piece)
        if self.variadic:
            parts.append("...")
        return f"{self.name}({', '.join(parts)}) -> {type_name(self.returns)}"
