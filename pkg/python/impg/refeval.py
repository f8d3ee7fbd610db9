"""Reference semantics on structured values.

:func:`eval_ref` interprets elaborated arrows directly as functions on
nested pairs and tagged unions, independently of the compiler and the VM.
:func:`rep` maps such values to forests, so the two evaluators can be
compared exactly. Library arrows are run by converting their argument to a
forest and the result back (:func:`unrep`).

Binary object expressions that flatten to the same flat object denote the
same set up to canonical isomorphism. Wherever two such types meet (the two
sides of a composition, the branches of a case), values are converted with
:func:`coerce`.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union

from .compiler import CompiledProgram, compile_program
from .config import DEFAULT_BUDGET
from .errors import BudgetExhausted, TypeMismatch, UninhabitedType
from .forest import Forest, Leaf, Node, mk_node, width
from .objects import FlatObj, flatten, slen, to_obj
from .syntax import (
    ArrBang, ArrCall, ArrCase, ArrDist, ArrId, ArrInj1, ArrInj2, ArrName, ArrowExpr, ArrPair, ArrProd,
    ArrProj1, ArrProj2, ArrSeq, ArrSum, ArrTerm, ObjExpr, ObjI, ObjName, ObjO, ObjProd, ObjSum, Program,
    format_arrow,
)

logger = logging.getLogger(__name__)


# -- values ------------------------------------------------------------------


@dataclass(frozen=True)
class Unit:
    pass


@dataclass(frozen=True)
class Base:
    datum: Any


@dataclass(frozen=True)
class PairV:
    l: "Value"
    r: "Value"


@dataclass(frozen=True)
class Inl:
    v: "Value"


@dataclass(frozen=True)
class Inr:
    v: "Value"


Value = Union[Unit, Base, PairV, Inl, Inr]
Types = Mapping[str, Tuple[ObjExpr, ObjExpr]]


def check_value(v: Value, t: ObjExpr) -> bool:
    """Structural membership of ``v`` in ``t``."""
    if isinstance(t, ObjI):
        return isinstance(v, Unit)
    if isinstance(t, ObjO):
        return False
    if isinstance(t, ObjName):
        return isinstance(v, Base)
    if isinstance(t, ObjProd):
        return isinstance(v, PairV) and check_value(v.l, t.left) and check_value(v.r, t.right)
    if isinstance(v, Inl):
        return check_value(v.v, t.left)
    return isinstance(v, Inr) and check_value(v.v, t.right)


def _as_expr(t: Union[ObjExpr, FlatObj]) -> ObjExpr:
    return t if isinstance(t, (ObjName, ObjI, ObjO, ObjSum, ObjProd)) else to_obj(t)


def rep(v: Value, t: Union[ObjExpr, FlatObj]) -> Forest:
    """Forest representing ``v`` as an element of ``t``.

    A flat object is read as the right-nested expression :func:`to_obj`
    gives, so ``Inr(Inl(x))`` is the second summand of ``+(A B C)``.

    Raises:
        TypeMismatch: If ``v`` is not an element of ``t``.
    """
    t = _as_expr(t)
    if isinstance(t, ObjI) and isinstance(v, Unit):
        return ()
    if isinstance(t, ObjName) and isinstance(v, Base):
        return (Leaf(v.datum),)
    if isinstance(t, ObjProd) and isinstance(v, PairV):
        return rep(v.l, t.left) + rep(v.r, t.right)
    if isinstance(t, ObjSum) and isinstance(v, (Inl, Inr)):
        q, r = slen(flatten(t.left)), slen(flatten(t.right))
        if isinstance(v, Inl):
            body = rep(v.v, t.left)
            return body if r == 0 else (mk_node(0, body),)
        body = rep(v.v, t.right)
        return body if q == 0 else (mk_node(q, body),)
    raise TypeMismatch(f"{v!r} is not an element of {t!r}")


def unrep(d: Forest, t: Union[ObjExpr, FlatObj]) -> Value:
    """Inverse of :func:`rep` at a known type.

    Raises:
        TypeMismatch: If ``d`` does not represent an element of ``t``.
    """
    t = _as_expr(t)
    d = tuple(d)
    if isinstance(t, ObjI):
        if d:
            raise TypeMismatch(f"expected the empty forest for I, got {d!r}")
        return Unit()
    if isinstance(t, ObjName):
        if len(d) != 1 or not isinstance(d[0], Leaf):
            raise TypeMismatch(f"expected one leaf for {t.name}, got {d!r}")
        return Base(d[0].datum)
    if isinstance(t, ObjProd):
        k = width(flatten(t.left))
        if len(d) < k:
            raise TypeMismatch(f"forest too short for {t!r}: {d!r}")
        return PairV(unrep(d[:k], t.left), unrep(d[k:], t.right))
    if isinstance(t, ObjSum):
        q, r = slen(flatten(t.left)), slen(flatten(t.right))
        if r == 0:
            return Inl(unrep(d, t.left))
        if q == 0:
            return Inr(unrep(d, t.right))
        if len(d) != 1 or not isinstance(d[0], Node):
            raise TypeMismatch(f"expected one tagged tree for {t!r}, got {d!r}")
        node = d[0]
        if node.tag < q:
            return Inl(unrep(node.children if q == 1 else d, t.left))
        k = node.tag - q
        if k >= r:
            raise TypeMismatch(f"tag {node.tag} out of range for {t!r}")
        return Inr(unrep(node.children if r == 1 else (mk_node(k, node.children),), t.right))
    raise TypeMismatch(f"no element of {t!r} is represented by {d!r}")


def coerce(v: Value, source: ObjExpr, target: ObjExpr) -> Value:
    """Move ``v`` across the canonical isomorphism between equal flat types."""
    if source == target:
        return v
    if flatten(source) != flatten(target):
        raise TypeMismatch(f"cannot coerce between {source!r} and {target!r}")
    return unrep(rep(v, source), target)


# -- natural types of elaborated arrows ----------------------------------------


def arrow_type(f: ArrowExpr, types: Types) -> Tuple[ObjExpr, ObjExpr]:
    """Binary domain and codomain read off an elaborated arrow.

    Raises:
        TypeMismatch: If ``f`` contains a polymorphic structural arrow or an
            unknown name.
    """
    if isinstance(f, ArrName):
        try:
            return types[f.name]
        except KeyError:
            raise TypeMismatch(f"unknown arrow {f.name}") from None
    if isinstance(f, (ArrId, ArrBang, ArrTerm)):
        if f.obj is None:
            raise TypeMismatch(f"{format_arrow(f)} is not elaborated")
        x = f.obj
        if isinstance(f, ArrId):
            return x, x
        return (ObjO(), x) if isinstance(f, ArrBang) else (x, ObjI())
    if isinstance(f, (ArrInj1, ArrInj2, ArrProj1, ArrProj2, ArrDist)):
        if f.objs is None:
            raise TypeMismatch(f"{format_arrow(f)} is not elaborated")
        if isinstance(f, ArrDist):
            x, y1, y2 = f.objs
            return ObjProd(x, ObjSum(y1, y2)), ObjSum(ObjProd(x, y1), ObjProd(x, y2))
        x, y = f.objs
        if isinstance(f, ArrInj1):
            return x, ObjSum(x, y)
        if isinstance(f, ArrInj2):
            return y, ObjSum(x, y)
        return ObjProd(x, y), (x if isinstance(f, ArrProj1) else y)
    if isinstance(f, ArrCall):
        if f.objs is None:
            raise TypeMismatch(f"{format_arrow(f)} is not elaborated")
        return f.objs[0], f.objs[2]
    if isinstance(f, ArrSeq):
        return arrow_type(f.first, types)[0], arrow_type(f.then, types)[1]
    (d1, c1), (d2, c2) = arrow_type(f.left, types), arrow_type(f.right, types)
    if isinstance(f, ArrSum):
        return ObjSum(d1, d2), ObjSum(c1, c2)
    if isinstance(f, ArrProd):
        return ObjProd(d1, d2), ObjProd(c1, c2)
    if isinstance(f, ArrCase):
        return ObjSum(d1, d2), c1
    return d1, ObjProd(c1, c2)


# -- evaluation ----------------------------------------------------------------


class Evaluator:
    """Evaluates elaborated arrows against a compiled program's definitions."""

    def __init__(self, program: Optional[CompiledProgram] = None, budget: int = DEFAULT_BUDGET) -> None:
        self.program = program
        self.budget = budget
        self.steps = 0
        self.types: Dict[str, Tuple[ObjExpr, ObjExpr]] = program.arrow_types() if program else {}

    def type_of(self, f: ArrowExpr) -> Tuple[ObjExpr, ObjExpr]:
        return arrow_type(f, self.types)

    def eval(self, f: ArrowExpr, v: Value) -> Value:
        if isinstance(f, ArrName):
            return self._named(f.name, v)
        if isinstance(f, ArrId):
            return v
        if isinstance(f, ArrInj1):
            return Inl(v)
        if isinstance(f, ArrInj2):
            return Inr(v)
        if isinstance(f, (ArrProj1, ArrProj2)):
            if not isinstance(v, PairV):
                raise TypeMismatch(f"projection applied to {v!r}")
            return v.l if isinstance(f, ArrProj1) else v.r
        if isinstance(f, ArrBang):
            raise TypeMismatch("the initial map has no argument to act on")
        if isinstance(f, ArrTerm):
            return Unit()
        if isinstance(f, ArrDist):
            if not isinstance(v, PairV) or not isinstance(v.r, (Inl, Inr)):
                raise TypeMismatch(f"dist applied to {v!r}")
            pair = PairV(v.l, v.r.v)
            return Inl(pair) if isinstance(v.r, Inl) else Inr(pair)
        if isinstance(f, ArrSeq):
            w = self.eval(f.first, v)
            return self.eval(f.then, coerce(w, self.type_of(f.first)[1], self.type_of(f.then)[0]))
        if isinstance(f, ArrSum):
            if isinstance(v, Inl):
                return Inl(self.eval(f.left, v.v))
            if isinstance(v, Inr):
                return Inr(self.eval(f.right, v.v))
            raise TypeMismatch(f"sum applied to {v!r}")
        if isinstance(f, ArrProd):
            if not isinstance(v, PairV):
                raise TypeMismatch(f"product applied to {v!r}")
            return PairV(self.eval(f.left, v.l), self.eval(f.right, v.r))
        if isinstance(f, ArrCase):
            if isinstance(v, Inl):
                return self.eval(f.left, v.v)
            if isinstance(v, Inr):
                w = self.eval(f.right, v.v)
                return coerce(w, self.type_of(f.right)[1], self.type_of(f.left)[1])
            raise TypeMismatch(f"case applied to {v!r}")
        if isinstance(f, ArrPair):
            left_dom, right_dom = self.type_of(f.left)[0], self.type_of(f.right)[0]
            return PairV(self.eval(f.left, v), self.eval(f.right, coerce(v, left_dom, right_dom)))
        if isinstance(f, ArrCall):
            return self._call(f, v)
        raise TypeError(f"not an arrow expression: {f!r}")

    def _call(self, f: ArrCall, v: Value) -> Value:
        if f.objs is None:
            raise TypeMismatch(f"{format_arrow(f)} is not elaborated")
        x, u, y = f.objs
        body_dom, body_cod = self.type_of(f.body)
        state_type, result_type = ObjSum(x, u), ObjSum(u, y)
        state: Value = Inl(v)
        while True:
            self.steps += 1
            if self.steps > self.budget:
                raise BudgetExhausted(self.budget)
            out = self.eval(f.body, coerce(state, state_type, body_dom))
            out = coerce(out, body_cod, result_type)
            if isinstance(out, Inr):
                return out.v
            state = Inr(out.v)

    def _named(self, name: str, v: Value) -> Value:
        compiled = self.program.find(name) if self.program else None
        if compiled is not None:
            inner_dom, inner_cod = self.type_of(compiled.arrow)
            w = self.eval(compiled.arrow, coerce(v, compiled.dom, inner_dom))
            return coerce(w, inner_cod, compiled.cod)
        dom, cod = self.types.get(name, (None, None))
        if dom is None:
            raise TypeMismatch(f"unknown arrow {name}")
        if self.program is not None:
            out = self.program.apply(name, rep(v, dom))
        else:
            from .stdlib import dispatch

            out = dispatch(name, rep(v, dom))
        return unrep(out, cod)


def eval_ref(
    f: ArrowExpr,
    v: Value,
    prog: Union[Program, CompiledProgram, None] = None,
    budget: int = DEFAULT_BUDGET,
    *,
    types: Optional[Types] = None,
) -> Value:
    """Evaluate an elaborated arrow on ``v``.

    Args:
        f: Fully annotated arrow.
        v: Element of the arrow's domain.
        prog: Program whose definitions and library references ``f`` uses.
        budget: Maximum number of loop-body applications.
        types: Extra arrow types, for library arrows not declared in ``prog``.
    """
    if isinstance(prog, Program):
        prog = compile_program(prog)
    evaluator = Evaluator(prog, budget)
    if types:
        evaluator.types.update(types)
    return evaluator.eval(f, v)


# -- random generation -----------------------------------------------------------


def _rng(seed: Union[int, random.Random]) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def inhabited(t: ObjExpr) -> bool:
    if isinstance(t, ObjO):
        return False
    if isinstance(t, ObjProd):
        return inhabited(t.left) and inhabited(t.right)
    if isinstance(t, ObjSum):
        return inhabited(t.left) or inhabited(t.right)
    return True


def gen_value(t: ObjExpr, seed: Union[int, random.Random], *, max_datum: int = 20) -> Value:
    """Random element of ``t``, deterministic in ``seed``.

    Raises:
        UninhabitedType: If ``t`` has no elements.
    """
    rng = _rng(seed)
    if not inhabited(t):
        raise UninhabitedType(f"{t!r} has no elements")
    return _gen_value(t, rng, max_datum)


def _gen_value(t: ObjExpr, rng: random.Random, max_datum: int) -> Value:
    if isinstance(t, ObjI):
        return Unit()
    if isinstance(t, ObjName):
        return Base(rng.randint(0, max_datum))
    if isinstance(t, ObjProd):
        return PairV(_gen_value(t.left, rng, max_datum), _gen_value(t.right, rng, max_datum))
    sides = [side for side in ("l", "r") if inhabited(t.left if side == "l" else t.right)]
    if rng.choice(sides) == "l":
        return Inl(_gen_value(t.left, rng, max_datum))
    return Inr(_gen_value(t.right, rng, max_datum))


N = ObjName("N")
ABSTRACT = (ObjName("A"), ObjName("B"), ObjName("C"))


def gen_type(rng: random.Random, depth: int = 2, basics: Sequence[ObjExpr] = (N,) + ABSTRACT) -> ObjExpr:
    """Random inhabited object over ``basics`` and ``I``."""
    roll = rng.random()
    if depth <= 0 or roll < 0.4:
        return rng.choice(tuple(basics) + (ObjI(),))
    cls = ObjSum if roll < 0.7 else ObjProd
    return cls(gen_type(rng, depth - 1, basics), gen_type(rng, depth - 1, basics))


class ArrowGenerator:
    """Builds random well-typed elaborated arrows, type-directed from the domain.

    Args:
        types: Library arrows available as leaves, with their object types.
        rng: Source of randomness.
        basics: Basic objects used for fresh types.
    """

    def __init__(self, types: Types, rng: random.Random, basics: Sequence[ObjExpr] = (N,) + ABSTRACT) -> None:
        self.types = dict(types)
        self.rng = rng
        self.basics = tuple(basics)

    def _fresh(self) -> ObjExpr:
        return gen_type(self.rng, 1, self.basics)

    def leaf(self, x: ObjExpr) -> Tuple[ArrowExpr, ObjExpr]:
        options = [
            lambda: (ArrId(x), x),
            lambda: (ArrTerm(x), ObjI()),
            lambda: self._inj(x),
        ]
        if isinstance(x, ObjProd):
            options.append(lambda: (ArrProj1((x.left, x.right)), x.left))
            options.append(lambda: (ArrProj2((x.left, x.right)), x.right))
            if isinstance(x.right, ObjSum):
                options.append(lambda: (ArrDist((x.left, x.right.left, x.right.right)),
                                        ObjSum(ObjProd(x.left, x.right.left), ObjProd(x.left, x.right.right))))
        for name, (dom, cod) in sorted(self.types.items()):
            if dom == x:
                options.append(lambda name=name, cod=cod: (ArrName(name), cod))
        return self.rng.choice(options)()

    def _inj(self, x: ObjExpr) -> Tuple[ArrowExpr, ObjExpr]:
        other = self._fresh()
        if self.rng.random() < 0.5:
            return ArrInj1((x, other)), ObjSum(x, other)
        return ArrInj2((other, x)), ObjSum(other, x)

    def arrow(self, x: ObjExpr, depth: int) -> Tuple[ArrowExpr, ObjExpr]:
        """Random arrow out of ``x`` and its codomain."""
        if depth <= 0 or self.rng.random() < 0.25:
            return self.leaf(x)
        choices = ["seq", "pair", "call"]
        if isinstance(x, ObjSum):
            choices += ["sum", "case", "case"]
        if isinstance(x, ObjProd):
            choices += ["prod", "prod"]
        if x == N and {"s", "p"} <= set(self.types):
            choices.append("countdown")
        kind = self.rng.choice(choices)
        if kind == "seq":
            f, y = self.arrow(x, depth - 1)
            g, z = self.arrow(y, depth - 1)
            return ArrSeq(f, g), z
        if kind == "pair":
            f, y = self.arrow(x, depth - 1)
            g, z = self.arrow(x, depth - 1)
            return ArrPair(f, g), ObjProd(y, z)
        if kind == "sum":
            f, y = self.arrow(x.left, depth - 1)
            g, z = self.arrow(x.right, depth - 1)
            return ArrSum(f, g), ObjSum(y, z)
        if kind == "prod":
            f, y = self.arrow(x.left, depth - 1)
            g, z = self.arrow(x.right, depth - 1)
            return ArrProd(f, g), ObjProd(y, z)
        if kind == "case":
            f, y = self.arrow(x.left, depth - 1)
            g, z = self.arrow(x.right, depth - 1)
            if y == z:
                return ArrCase(f, g), y
            both = ObjSum(y, z)
            return ArrCase(ArrSeq(f, ArrInj1((y, z))), ArrSeq(g, ArrInj2((y, z)))), both
        if kind == "countdown":
            return countdown(), N
        # two-round loop: park the input in the local space, then finish
        f, y = self.arrow(x, depth - 1)
        body = ArrCase(ArrInj1((x, y)), ArrSeq(f, ArrInj2((x, y))))
        return ArrCall((x, x, y), body), y


def countdown() -> ArrowExpr:
    """``N -> N`` loop calling ``p`` until zero, then answering ``s`` of the unit."""
    zero = ArrSeq(ArrSeq(ArrInj1((ObjI(), N)), ArrName("s")), ArrInj2((N, N)))
    step = ArrSeq(ArrName("p"), ArrCase(zero, ArrInj1((N, N))))
    return ArrCall((N, N, N), ArrCase(step, step))


def gen_arrow(
    sig: Types, seed: Union[int, random.Random], *, depth: int = 5, dom: Optional[ObjExpr] = None
) -> Tuple[ArrowExpr, ObjExpr, ObjExpr]:
    """Random elaborated arrow with its domain and codomain.

    Args:
        sig: Library arrows usable as leaves, with object types.
        seed: Integer seed or a ``random.Random``.
        depth: Maximum nesting of operators.
        dom: Domain to start from; random when omitted.
    """
    rng = _rng(seed)
    x = dom if dom is not None else gen_type(rng, 2)
    f, y = ArrowGenerator(sig, rng).arrow(x, depth)
    return f, x, y
