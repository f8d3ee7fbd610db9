"""Rewriting arrows into a single outermost call.

Every elaborated arrow built from basic arrows with case, pairing,
composition and ``call`` equals one ``call[X, U, Y, f]`` whose body ``f``
contains no call. :func:`normalize` builds that form by structural
recursion: call-free pieces are lifted into trivial calls, each operator is
pushed through the calls of its operands, and a call of a call is merged
into one loop over the union of both local spaces.

The reorderings of summands that the constructions need are emitted as
cases of annotated injections (:func:`permute_sum`), so the result is an
ordinary elaborated arrow that both evaluators accept.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Tuple

from .compiler import CompiledProgram
from .errors import TypeMismatch
from .objects import flatten
from .refeval import arrow_type
from .syntax import (
    ArrBang, ArrCall, ArrCase, ArrDist, ArrId, ArrInj1, ArrInj2, ArrName, ArrowExpr, ArrPair, ArrProd,
    ArrProj1, ArrProj2, ArrSeq, ArrSum, ObjExpr, ObjO, ObjProd, ObjSum, children, format_arrow, format_obj,
)

logger = logging.getLogger(__name__)

Types = Mapping[str, Tuple[ObjExpr, ObjExpr]]


@dataclass(frozen=True)
class CallForm:
    """``call[input, local, output, body]`` with ``body`` free of calls.

    ``body`` goes from ``input + local`` to ``local + output``; its natural
    types only have to agree with those after flattening.
    """

    input: ObjExpr
    local: ObjExpr
    output: ObjExpr
    body: ArrowExpr


def as_call(cf: CallForm) -> ArrCall:
    return ArrCall((cf.input, cf.local, cf.output), cf.body)


def _same(x: ObjExpr, y: ObjExpr, what: str) -> None:
    if flatten(x) != flatten(y):
        raise TypeMismatch(f"{what}: {format_obj(x)} does not match {format_obj(y)}")


# -- structural isomorphisms ---------------------------------------------------


def nest_sum(parts: Sequence[ObjExpr]) -> ObjExpr:
    """Right-nested sum of ``parts``; the empty sum is ``O``."""
    if not parts:
        return ObjO()
    result = parts[-1]
    for part in reversed(parts[:-1]):
        result = ObjSum(part, result)
    return result


def inject(k: int, parts: Sequence[ObjExpr]) -> ArrowExpr:
    """Injection of summand ``k`` into the right-nested sum of ``parts``."""
    if len(parts) == 1:
        return ArrId(parts[0])
    rest = nest_sum(parts[1:])
    if k == 0:
        return ArrInj1((parts[0], rest))
    return ArrSeq(inject(k - 1, parts[1:]), ArrInj2((parts[0], rest)))


def permute_sum(parts: Sequence[ObjExpr], order: Sequence[int]) -> ArrowExpr:
    """Isomorphism from ``nest_sum(parts)`` to ``nest_sum([parts[i] for i in order])``."""
    if sorted(order) != list(range(len(parts))):
        raise ValueError(f"{list(order)} is not a permutation of {len(parts)} summands")
    target = [parts[i] for i in order]
    arms = [inject(order.index(k), target) for k in range(len(parts))]
    result = arms[-1]
    for arm in reversed(arms[:-1]):
        result = ArrCase(arm, result)
    return result


def twist(a: ObjExpr, b: ObjExpr) -> ArrowExpr:
    return ArrPair(ArrProj2((a, b)), ArrProj1((a, b)))


# -- constructions -------------------------------------------------------------


def lift(f: ArrowExpr, dom: ObjExpr, cod: ObjExpr) -> CallForm:
    """Trivial call computing the call-free arrow ``f : dom -> cod``."""
    return CallForm(dom, ObjO(), cod, ArrSeq(ArrCase(f, ArrBang(cod)), ArrInj2((ObjO(), cod))))


def seq_nf(a: CallForm, b: CallForm) -> CallForm:
    """``a`` then ``b``: one loop whose local space holds both locals and ``a``'s output."""
    _same(a.output, b.input, "composition")
    local = ObjSum(ObjSum(a.local, a.output), b.local)
    return CallForm(a.input, local, b.output, ArrSum(a.body, b.body))


def sum_nf(a: CallForm, b: CallForm) -> CallForm:
    """``a + b``: both loops side by side, summands regrouped around them."""
    x, u, y = a.input, a.local, a.output
    x2, u2, y2 = b.input, b.local, b.output
    before = permute_sum([x, x2, u, u2], [0, 2, 1, 3])
    after = permute_sum([u, y, u2, y2], [0, 2, 1, 3])
    body = ArrSeq(ArrSeq(before, ArrSum(a.body, b.body)), after)
    return CallForm(ObjSum(x, x2), ObjSum(u, u2), ObjSum(y, y2), body)


def _untwist(s: ObjExpr, u: ObjExpr, y: ObjExpr, other: ObjExpr) -> ArrowExpr:
    """``(u + y) * other -> u * other + y * other``."""
    return ArrSeq(twist(s, other), ArrSeq(ArrDist((other, u, y)), ArrSum(twist(other, u), twist(other, y))))


def prod_nf(a: CallForm, b: CallForm) -> CallForm:
    """``a * b``: both loops advance in lockstep until both have answered.

    The local space records which side is still running: both, only the
    left one or only the right one.
    """
    x, u, y = a.input, a.local, a.output
    x2, u2, y2 = b.input, b.local, b.output
    f, g = a.body, b.body
    local = nest_sum([ObjProd(u, u2), ObjProd(u, y2), ObjProd(y, u2)])
    start = ArrProd(ArrSeq(ArrInj1((x, u)), f), ArrSeq(ArrInj1((x2, u2)), g))
    both = ArrProd(ArrSeq(ArrInj2((x, u)), f), ArrSeq(ArrInj2((x2, u2)), g))
    left = ArrProd(ArrSeq(ArrInj2((x, u)), f), ArrInj2((u2, y2)))
    right = ArrProd(ArrInj2((u, y)), ArrSeq(ArrInj2((x2, u2)), g))
    step = ArrCase(start, ArrCase(both, ArrCase(left, right)))

    s = ObjSum(u, y)
    spread = ArrSum(_untwist(s, u, y, u2), _untwist(s, u, y, y2))
    parts = [ObjProd(u, u2), ObjProd(y, u2), ObjProd(u, y2), ObjProd(y, y2)]
    regroup = ArrSeq(ArrDist((s, u2, y2)), ArrSeq(spread, permute_sum(parts, [0, 2, 1, 3])))
    return CallForm(ObjProd(x, x2), local, ObjProd(y, y2), ArrSeq(step, regroup))


def case_nf(a: CallForm, b: CallForm) -> CallForm:
    """``a | b`` as the codiagonal after ``a + b``."""
    _same(a.output, b.output, "case branches")
    y = a.output
    return seq_nf(sum_nf(a, b), lift(ArrCase(ArrId(y), ArrId(y)), ObjSum(y, b.output), y))


def pair_nf(a: CallForm, b: CallForm) -> CallForm:
    """``(a, b)`` as the diagonal before ``a * b``."""
    _same(a.input, b.input, "pairing")
    x = a.input
    return seq_nf(lift(ArrPair(ArrId(x), ArrId(x)), x, ObjProd(x, b.input)), prod_nf(a, b))


def flatten_nf(outer: CallForm) -> CallForm:
    """Merge ``call[X, V, Y, call[X + V, U, V + Y, f]]`` into one call with local ``U + V``."""
    inner = outer.body
    if not isinstance(inner, ArrCall) or inner.objs is None:
        raise TypeMismatch(f"expected an annotated call as loop body, got {format_arrow(inner)}")
    x, v, y = outer.input, outer.local, outer.output
    inner_input, u, inner_output = inner.objs
    _same(inner_input, ObjSum(x, v), "nested call input")
    _same(inner_output, ObjSum(v, y), "nested call output")
    body = ArrSeq(permute_sum([x, u, v], [0, 2, 1]), inner.body)
    return CallForm(x, ObjSum(u, v), y, body)


# -- normalization -------------------------------------------------------------


class Normalizer:
    """Normalizes arrows against the definitions of a compiled program.

    Definitions whose bodies contain calls are inlined; call-free ones stay
    as names.
    """

    def __init__(self, program: Optional[CompiledProgram] = None, types: Optional[Types] = None) -> None:
        self.program = program
        self.types = dict(program.arrow_types() if program else {})
        if types:
            self.types.update(types)
        self._calls: dict = {}

    def _definition(self, name: str) -> Optional[ArrowExpr]:
        compiled = self.program.find(name) if self.program else None
        return None if compiled is None else compiled.arrow

    def has_call(self, f: ArrowExpr) -> bool:
        """True if ``f`` or any definition it names contains a call."""
        if isinstance(f, ArrCall):
            return True
        if isinstance(f, ArrName):
            if f.name not in self._calls:
                body = self._definition(f.name)
                self._calls[f.name] = False
                self._calls[f.name] = body is not None and self.has_call(body)
            return self._calls[f.name]
        return any(self.has_call(c) for c in children(f))

    def normalize(self, f: ArrowExpr) -> CallForm:
        if not self.has_call(f):
            dom, cod = arrow_type(f, self.types)
            return lift(f, dom, cod)
        if isinstance(f, ArrName):
            return self._inline(f.name)
        if isinstance(f, ArrSeq):
            return seq_nf(self.normalize(f.first), self.normalize(f.then))
        if isinstance(f, ArrCall):
            if f.objs is None:
                raise TypeMismatch(f"{format_arrow(f)} is not elaborated")
            x, u, y = f.objs
            return flatten_nf(CallForm(x, u, y, as_call(self.normalize(f.body))))
        a, b = self.normalize(f.left), self.normalize(f.right)
        if isinstance(f, ArrSum):
            return sum_nf(a, b)
        if isinstance(f, ArrProd):
            return prod_nf(a, b)
        if isinstance(f, ArrCase):
            return case_nf(a, b)
        if isinstance(f, ArrPair):
            return pair_nf(a, b)
        raise TypeError(f"not an arrow expression: {f!r}")

    def _inline(self, name: str) -> CallForm:
        compiled = self.program.find(name)
        logger.debug("inlining %s", name)
        cf = self.normalize(compiled.arrow)
        return CallForm(compiled.dom, cf.local, compiled.cod, cf.body)


def normalize(
    f: ArrowExpr, program: Optional[CompiledProgram] = None, *, types: Optional[Types] = None
) -> CallForm:
    """Single-call form of the elaborated arrow ``f``.

    Args:
        f: Elaborated arrow, for instance a compiled definition's ``arrow``.
        program: Program whose definitions ``f`` may name.
        types: Object types of library arrows not declared in ``program``.

    Raises:
        TypeMismatch: If ``f`` is not elaborated or not well typed.
    """
    cf = Normalizer(program, types).normalize(f)
    logger.debug("normal form has local space %s", format_obj(cf.local))
    return cf


def normalize_def(name: str, program: CompiledProgram) -> CallForm:
    """Normal form of a compiled definition, at its declared objects."""
    compiled = program.find(name)
    if compiled is None:
        raise TypeMismatch(f"no definition named {name}")
    cf = normalize(compiled.arrow, program)
    return CallForm(compiled.dom, cf.local, compiled.cod, cf.body)


def count_calls(f: ArrowExpr) -> int:
    own = 1 if isinstance(f, ArrCall) else 0
    return own + sum(count_calls(c) for c in children(f))
