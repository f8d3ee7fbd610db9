"""Flat objects in normal form.

Objects are stored as variable-arity sum and product lists. In normal form no
list has exactly one item and no list directly contains a list of the same
kind, so ``A + (B + C)`` and ``(A + B) + C`` share the single representation
``+(A B C)``. ``+()`` is the initial object and ``*()`` the terminal one.

A product with an empty-sum factor is kept as written; ``X * O`` does not
collapse to ``O``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple, Union

from .syntax import ObjExpr, ObjI, ObjName, ObjO, ObjProd, ObjSum


@dataclass(frozen=True)
class FlatBasic:
    name: str


@dataclass(frozen=True)
class SumList:
    items: Tuple["FlatObj", ...]


@dataclass(frozen=True)
class ProdList:
    items: Tuple["FlatObj", ...]


FlatObj = Union[FlatBasic, SumList, ProdList]

EMPTY = SumList(())
UNIT = ProdList(())


def as_sum(x: FlatObj) -> Tuple[FlatObj, ...]:
    """Summands of ``x``; a non-sum is a sum of one summand."""
    return x.items if isinstance(x, SumList) else (x,)


def as_prod(x: FlatObj) -> Tuple[FlatObj, ...]:
    """Factors of ``x``; a non-product is a product of one factor."""
    return x.items if isinstance(x, ProdList) else (x,)


def slen(x: FlatObj) -> int:
    return len(as_sum(x))


def plen(x: FlatObj) -> int:
    return len(as_prod(x))


def rebuild_sum(items: Iterable[FlatObj]) -> FlatObj:
    """Normal form of the sum of ``items``.

    Nested sums are spliced in and a single remaining summand is returned
    unwrapped, so ``rebuild_sum(as_sum(x)) == x`` for every flat ``x``.
    """
    flat: list = []
    for item in items:
        flat.extend(as_sum(item))
    if len(flat) == 1:
        return flat[0]
    return SumList(tuple(flat))


def rebuild_prod(items: Iterable[FlatObj]) -> FlatObj:
    """Normal form of the product of ``items``; dual of :func:`rebuild_sum`."""
    flat: list = []
    for item in items:
        flat.extend(as_prod(item))
    if len(flat) == 1:
        return flat[0]
    return ProdList(tuple(flat))


def elem(n: int, items: Sequence[FlatObj]) -> FlatObj:
    """Zero-based item ``n``; out of range is a caller error."""
    if not 0 <= n < len(items):
        raise IndexError(f"elem {n} out of range for {len(items)} items")
    return items[n]


def flatten(x: ObjExpr) -> FlatObj:
    """Normal form of an object expression."""
    if isinstance(x, ObjName):
        return FlatBasic(x.name)
    if isinstance(x, ObjI):
        return UNIT
    if isinstance(x, ObjO):
        return EMPTY
    if isinstance(x, ObjSum):
        return rebuild_sum((flatten(x.left), flatten(x.right)))
    if isinstance(x, ObjProd):
        return rebuild_prod((flatten(x.left), flatten(x.right)))
    raise TypeError(f"not an object expression: {x!r}")


def _nest(items: Sequence[ObjExpr], join) -> ObjExpr:
    result = items[-1]
    for item in reversed(items[:-1]):
        result = join(item, result)
    return result


def to_obj(x: FlatObj) -> ObjExpr:
    """Right-nested object expression whose flattening is ``x``.

    ``+()`` reads back as ``O`` and ``*()`` as ``I``.
    """
    if isinstance(x, FlatBasic):
        return ObjName(x.name)
    if isinstance(x, SumList):
        if not x.items:
            return ObjO()
        return _nest([to_obj(item) for item in x.items], ObjSum)
    if not x.items:
        return ObjI()
    return _nest([to_obj(item) for item in x.items], ObjProd)


def format_flat(x: FlatObj) -> str:
    """Diagnostic rendering, e.g. ``*(A +(B C))``."""
    if isinstance(x, FlatBasic):
        return x.name
    mark = "+" if isinstance(x, SumList) else "*"
    return f"{mark}({' '.join(format_flat(item) for item in x.items)})"


def basic_names(x: FlatObj) -> Tuple[str, ...]:
    """Basic object names of ``x`` in left-to-right order, with repeats."""
    if isinstance(x, FlatBasic):
        return (x.name,)
    return tuple(name for item in x.items for name in basic_names(item))


def word_length(x: ObjExpr) -> int:
    """Length of the word coding of an element of ``x``.

    Under that coding every atom takes one cell and a compound takes the
    cells of both sides, so an element of ``n * X^n`` with ``X`` basic costs
    ``n * n`` cells. Only used to compare storage against forests.
    """
    if isinstance(x, (ObjName, ObjI, ObjO)):
        return 1
    return word_length(x.left) + word_length(x.right)
