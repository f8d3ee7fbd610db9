"""Best-effort domain and codomain inference.

Both functions assume the arrow is well typed and answer ``None`` when the
type cannot be read off the arrow alone, as for a polymorphic injection.
``None`` is absorbing: a sum or product with an unknown part is unknown.
The only exceptions are the domain of a pairing and the codomain of a case,
which take whichever component is known (the first one when both are).
"""

from __future__ import annotations

from typing import Optional, Sequence

from .objects import EMPTY, UNIT, FlatObj, flatten, rebuild_prod, rebuild_sum
from .signature import Signature
from .syntax import (
    ArrBang, ArrCall, ArrCase, ArrDist, ArrId, ArrInj1, ArrInj2, ArrName, ArrowExpr, ArrPair, ArrProd,
    ArrProj1, ArrProj2, ArrSeq, ArrSum, ArrTerm,
)

MaybeFlat = Optional[FlatObj]


def _sum(items: Sequence[MaybeFlat]) -> MaybeFlat:
    if any(item is None for item in items):
        return None
    return rebuild_sum(items)


def _prod(items: Sequence[MaybeFlat]) -> MaybeFlat:
    if any(item is None for item in items):
        return None
    return rebuild_prod(items)


def _first_known(a: MaybeFlat, b: MaybeFlat) -> MaybeFlat:
    return a if a is not None else b


def dom(f: ArrowExpr, sig: Signature) -> MaybeFlat:
    """Flat domain of ``f`` or None when it cannot be inferred."""
    if isinstance(f, ArrName):
        entry = sig.spec_of(f.name)
        return entry.dom if entry else None
    if isinstance(f, ArrId):
        return None if f.obj is None else flatten(f.obj)
    if isinstance(f, ArrInj1):
        return None if f.objs is None else flatten(f.objs[0])
    if isinstance(f, ArrInj2):
        return None if f.objs is None else flatten(f.objs[1])
    if isinstance(f, (ArrProj1, ArrProj2)):
        return None if f.objs is None else rebuild_prod([flatten(x) for x in f.objs])
    if isinstance(f, ArrBang):
        return EMPTY
    if isinstance(f, ArrTerm):
        return None if f.obj is None else flatten(f.obj)
    if isinstance(f, ArrDist):
        if f.objs is None:
            return None
        x, y1, y2 = (flatten(o) for o in f.objs)
        return rebuild_prod([x, rebuild_sum([y1, y2])])
    if isinstance(f, (ArrSum, ArrCase)):
        return _sum([dom(f.left, sig), dom(f.right, sig)])
    if isinstance(f, ArrProd):
        return _prod([dom(f.left, sig), dom(f.right, sig)])
    if isinstance(f, ArrPair):
        return _first_known(dom(f.left, sig), dom(f.right, sig))
    if isinstance(f, ArrSeq):
        return dom(f.first, sig)
    if isinstance(f, ArrCall):
        return None if f.objs is None else flatten(f.objs[0])
    raise TypeError(f"not an arrow expression: {f!r}")


def cod(f: ArrowExpr, sig: Signature) -> MaybeFlat:
    """Flat codomain of ``f`` or None when it cannot be inferred."""
    if isinstance(f, ArrName):
        entry = sig.spec_of(f.name)
        return entry.cod if entry else None
    if isinstance(f, ArrId):
        return None if f.obj is None else flatten(f.obj)
    if isinstance(f, (ArrInj1, ArrInj2)):
        return None if f.objs is None else rebuild_sum([flatten(x) for x in f.objs])
    if isinstance(f, ArrProj1):
        return None if f.objs is None else flatten(f.objs[0])
    if isinstance(f, ArrProj2):
        return None if f.objs is None else flatten(f.objs[1])
    if isinstance(f, ArrBang):
        return None if f.obj is None else flatten(f.obj)
    if isinstance(f, ArrTerm):
        return UNIT
    if isinstance(f, ArrDist):
        if f.objs is None:
            return None
        x, y1, y2 = (flatten(o) for o in f.objs)
        return rebuild_sum([rebuild_prod([x, y1]), rebuild_prod([x, y2])])
    if isinstance(f, ArrSum):
        return _sum([cod(f.left, sig), cod(f.right, sig)])
    if isinstance(f, (ArrProd, ArrPair)):
        return _prod([cod(f.left, sig), cod(f.right, sig)])
    if isinstance(f, ArrCase):
        return _first_known(cod(f.left, sig), cod(f.right, sig))
    if isinstance(f, ArrSeq):
        return cod(f.then, sig)
    if isinstance(f, ArrCall):
        return None if f.objs is None else flatten(f.objs[2])
    raise TypeError(f"not an arrow expression: {f!r}")
