"""Whole-program diagnostics.

The checker walks a program in source order. It reports duplicate names,
objects mentioning undeclared basic objects, and arrows mentioning
undeclared basic arrows. The compiler decides whether a step goes from its
declared domain to its declared codomain. An empty result means the program
compiles.
"""

from __future__ import annotations

import logging
from typing import List, Sequence

from .compiler import Compiler
from .forest import Forest, check_data
from .objects import flatten
from .signature import (
    Ambiguous, ArrowKind, Diagnostic, DuplicateArrow, DuplicateObject, Entry, NotFromTo, Signature,
    UndeclaredArrows, UndeclaredObjects, arrow_built_from, obj_built_from,
)
from .syntax import Def, ObjExpr, Program

logger = logging.getLogger(__name__)


def _check_obj(x: ObjExpr, objects: Sequence[str], span) -> List[Diagnostic]:
    return [] if obj_built_from(x, objects) else [UndeclaredObjects(x, span=span)]


def _check_steps(d: Def, objects: Sequence[str], sig: Signature, exhaustive: bool) -> List[Diagnostic]:
    compiler = Compiler(sig, exhaustive=exhaustive)
    out: List[Diagnostic] = []
    here = d.dom
    span = d.span
    for step in d.steps:
        out += _check_obj(here, objects, span)
        if not arrow_built_from(step.arrow, sig):
            out.append(UndeclaredArrows(step.arrow, span=step.span))
        else:
            found = compiler.solutions(step.arrow, flatten(here), flatten(step.cod))
            if not found:
                out.append(NotFromTo(step.arrow, here, step.cod, span=step.span))
            elif len(found) > 1:
                out.append(Ambiguous(step.arrow, span=step.span))
        here, span = step.cod, step.span
    out += _check_obj(here, objects, span)
    return out


def tc_program(p: Program, *, exhaustive: bool = False) -> List[Diagnostic]:
    """Diagnostics for ``p`` in source order.

    Args:
        p: Parsed program.
        exhaustive: Also report steps with several distinct instantiations.
    """
    out: List[Diagnostic] = []
    objects: List[str] = []
    for name in p.objects:
        if name in objects:
            out.append(DuplicateObject(name))
        else:
            objects.append(name)

    sig = Signature()
    for ref in p.refs:
        out += _check_obj(ref.dom, objects, ref.span)
        out += _check_obj(ref.cod, objects, ref.span)
        if ref.name in sig:
            out.append(DuplicateArrow(ref.name, span=ref.span))
        else:
            sig = sig.extend(Entry(ref.name, flatten(ref.dom), flatten(ref.cod), ArrowKind.LIBRARY))

    for d in p.defs:
        fresh = d.name not in sig
        if not fresh:
            out.append(DuplicateArrow(d.name, span=d.span))
        out += _check_steps(d, objects, sig, exhaustive)
        if fresh:
            sig = sig.extend(Entry(d.name, flatten(d.dom), flatten(d.cod), ArrowKind.DEFINED))

    logger.info("checked %d definitions: %d diagnostics", len(p.defs), len(out))
    return out


def tc_data(d: Forest, t: ObjExpr) -> bool:
    return check_data(d, flatten(t))

