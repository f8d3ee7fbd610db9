"""Declared arrows, built-from predicates and diagnostics."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence, Tuple

from .objects import FlatObj
from .syntax import (
    ArrName, ArrowExpr, ObjExpr, ObjName, ObjProd, ObjSum, Span, children, format_arrow, format_obj,
)


class ArrowKind(enum.Enum):
    LIBRARY = "library"
    DEFINED = "defined"


@dataclass(frozen=True)
class Entry:
    name: str
    dom: FlatObj
    cod: FlatObj
    kind: ArrowKind = ArrowKind.LIBRARY


class Signature:
    """Ordered arrow table; lookup returns the earliest entry with a name."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[Entry] = ()) -> None:
        self._entries: Tuple[Entry, ...] = tuple(entries)

    def __iter__(self) -> Iterator[Entry]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, name: object) -> bool:
        return self.spec_of(name) is not None  # type: ignore[arg-type]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Signature) and self._entries == other._entries

    def __hash__(self) -> int:
        return hash(self._entries)

    def __repr__(self) -> str:
        return f"Signature({list(self._entries)!r})"

    def spec_of(self, name: str) -> Optional[Entry]:
        return next((e for e in self._entries if e.name == name), None)

    def extend(self, entry: Entry) -> "Signature":
        return Signature(self._entries + (entry,))


def spec_of(name: str, sig: Signature) -> Optional[Entry]:
    return sig.spec_of(name)


def obj_built_from(x: ObjExpr, objs: Sequence[str]) -> bool:
    """True iff every basic object name in ``x`` is among ``objs``."""
    if isinstance(x, ObjName):
        return x.name in objs
    if isinstance(x, (ObjSum, ObjProd)):
        return obj_built_from(x.left, objs) and obj_built_from(x.right, objs)
    return True


def arrow_built_from(f: ArrowExpr, sig: Signature) -> bool:
    """True iff every basic arrow name in ``f`` is declared in ``sig``."""
    if isinstance(f, ArrName):
        return f.name in sig
    return all(arrow_built_from(child, sig) for child in children(f))


# -- diagnostics -------------------------------------------------------------


@dataclass(frozen=True)
class Diagnostic:
    span: Optional[Span] = field(default=None, compare=False, kw_only=True)

    @property
    def message(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.message

    def render(self, filename: Optional[str] = None) -> str:
        """Message prefixed with ``file:line:column:`` when known."""
        where = []
        if filename:
            where.append(filename)
        if self.span is not None:
            where.append(str(self.span))
        return f"{':'.join(where)}: {self.message}" if where else self.message


@dataclass(frozen=True)
class DuplicateObject(Diagnostic):
    name: str

    @property
    def message(self) -> str:
        return f"object name {self.name} already used"


@dataclass(frozen=True)
class DuplicateArrow(Diagnostic):
    name: str

    @property
    def message(self) -> str:
        return f"arrow name {self.name} already used"


@dataclass(frozen=True)
class UndeclaredObjects(Diagnostic):
    obj: ObjExpr

    @property
    def message(self) -> str:
        return f"object {format_obj(self.obj)} contains undeclared basic objects"


@dataclass(frozen=True)
class UndeclaredArrows(Diagnostic):
    arrow: ArrowExpr

    @property
    def message(self) -> str:
        return f"arrow {format_arrow(self.arrow)} contains undeclared basic arrows"


@dataclass(frozen=True)
class NotFromTo(Diagnostic):
    arrow: ArrowExpr
    dom: ObjExpr
    cod: ObjExpr

    @property
    def message(self) -> str:
        return f"arrow {format_arrow(self.arrow)} is not from {format_obj(self.dom)} to {format_obj(self.cod)}"


@dataclass(frozen=True)
class Ambiguous(Diagnostic):
    arrow: ArrowExpr

    @property
    def message(self) -> str:
        return f"arrow {format_arrow(self.arrow)} is ambiguous"
