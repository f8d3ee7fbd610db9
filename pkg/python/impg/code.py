"""Machine code for the forest VM and its peephole optimizer.

Compilation first emits injections, projections and distributivity with
both list lengths (``Inj1``, ``Proj2``, ``Dist4``...) and pairings with their
split indices (``PairIdx``). :func:`peephole` removes degenerate instructions
and lowers the rest to the primitive forms the VM is fastest on. The VM also
accepts unoptimized code and gives it the same meaning.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# -- basic instructions ------------------------------------------------------


@dataclass(frozen=True)
class Apply:
    name: str


@dataclass(frozen=True)
class Nop:
    pass


@dataclass(frozen=True)
class Init:
    pass


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Tree:
    """Wrap the forest into one node tagged ``n``."""

    n: int


@dataclass(frozen=True)
class RightDel:
    n: int


@dataclass(frozen=True)
class LeftDel:
    n: int


@dataclass(frozen=True)
class Dist3:
    q: int
    q2: int
    n: int


@dataclass(frozen=True)
class Inj1:
    p: int
    q: int


@dataclass(frozen=True)
class Inj2:
    p: int
    q: int


@dataclass(frozen=True)
class Proj1:
    p: int
    q: int


@dataclass(frozen=True)
class Proj2:
    p: int
    q: int


@dataclass(frozen=True)
class Dist4:
    p: int
    q: int
    q2: int
    n: int


BasicOp = Union[Apply, Nop, Init, Term, Tree, RightDel, LeftDel, Dist3, Inj1, Inj2, Proj1, Proj2, Dist4]
PREOPT_OPS = (Inj1, Inj2, Proj1, Proj2, Dist4)


# -- code --------------------------------------------------------------------


@dataclass(frozen=True)
class Op:
    op: BasicOp


@dataclass(frozen=True)
class CompRef:
    name: str


@dataclass(frozen=True)
class Iter:
    """Run ``body`` on ``X + U`` until it lands in ``Y``.

    ``m``, ``n`` and ``p`` are the summand counts of ``X``, ``U`` and ``Y``.
    """

    body: "Code"
    m: int
    n: int
    p: int


@dataclass(frozen=True)
class Seq:
    l: "Code"
    r: "Code"


@dataclass(frozen=True)
class PairC:
    l: "Code"
    r: "Code"


@dataclass(frozen=True)
class PairIdx:
    l: "Code"
    p: int
    q: int
    r: "Code"


@dataclass(frozen=True)
class CaseC:
    l: "Code"
    p: int
    q: int
    r: "Code"


Code = Union[Op, CompRef, Iter, Seq, PairC, PairIdx, CaseC]

NOP = Op(Nop())
INIT = Op(Init())
TERM = Op(Term())


# -- peephole ------------------------------------------------------------------


def _basic(op: BasicOp) -> Code:
    if isinstance(op, Inj1):
        if op.q == 0:
            return INIT if op.p == 0 else NOP
        return INIT if op.p == 0 else Op(Tree(0))
    if isinstance(op, Inj2):
        if op.p == 0:
            return INIT if op.q == 0 else NOP
        return INIT if op.q == 0 else Op(Tree(op.p))
    if isinstance(op, Proj1):
        if op.q == 0:
            return TERM if op.p == 0 else NOP
        return TERM if op.p == 0 else Op(RightDel(op.q))
    if isinstance(op, Proj2):
        if op.p == 0:
            return TERM if op.q == 0 else NOP
        return TERM if op.q == 0 else Op(LeftDel(op.p))
    if isinstance(op, Dist4):
        if op.p == 0:
            return NOP
        if op.q == 0:
            return Op(Tree(1))
        if op.q2 == 0:
            return Op(Tree(0))
        return Op(Dist3(op.q, op.q2, op.n))
    return Op(op)


def _seq(l: Code, r: Code) -> Code:
    if l == NOP:
        return r
    if r == NOP:
        return l
    if l == INIT:
        return INIT
    if r == TERM:
        return TERM
    return Seq(l, r)


def peephole(code: Code) -> Code:
    """Optimize bottom-up, children first, to a fixpoint."""
    if isinstance(code, Op):
        return _basic(code.op)
    if isinstance(code, CompRef):
        return code
    if isinstance(code, Iter):
        if code.m == 0:
            return INIT
        body = peephole(code.body)
        if code.n == 0:
            return body
        return Iter(body, code.m, code.n, code.p)
    if isinstance(code, Seq):
        return _seq(peephole(code.l), peephole(code.r))
    if isinstance(code, PairC):
        return PairC(peephole(code.l), peephole(code.r))
    if isinstance(code, PairIdx):
        if code.p == 0:
            return peephole(code.r)
        if code.q == 0:
            return peephole(code.l)
        return PairC(peephole(code.l), peephole(code.r))
    if isinstance(code, CaseC):
        if code.p == 0:
            return peephole(code.r)
        if code.q == 0:
            return peephole(code.l)
        return CaseC(peephole(code.l), code.p, code.q, peephole(code.r))
    raise TypeError(f"not code: {code!r}")


# -- inspection ----------------------------------------------------------------


def code_size(code: Code) -> int:
    """Instruction count, weighting the unlowered forms one above their lowering."""
    if isinstance(code, Op):
        return 2 if isinstance(code.op, PREOPT_OPS) else 1
    if isinstance(code, CompRef):
        return 1
    if isinstance(code, Iter):
        return 1 + code_size(code.body)
    extra = 2 if isinstance(code, PairIdx) else 1
    return extra + code_size(code.l) + code_size(code.r)


def contains_preopt(code: Code) -> bool:
    """True if any unlowered instruction survives in ``code``."""
    if isinstance(code, Op):
        return isinstance(code.op, PREOPT_OPS)
    if isinstance(code, CompRef):
        return False
    if isinstance(code, Iter):
        return contains_preopt(code.body)
    if isinstance(code, PairIdx):
        return True
    return contains_preopt(code.l) or contains_preopt(code.r)


def count_iters(code: Code) -> int:
    if isinstance(code, Iter):
        return 1 + count_iters(code.body)
    if isinstance(code, (Op, CompRef)):
        return 0
    return count_iters(code.l) + count_iters(code.r)


_OP_NAMES = {
    Nop: "NOP", Init: "INIT", Term: "TERM", Tree: "TREE", RightDel: "RIGHTDEL", LeftDel: "LEFTDEL",
    Dist3: "DIST", Dist4: "DIST", Inj1: "INJ1", Inj2: "INJ2", Proj1: "PROJ1", Proj2: "PROJ2",
}


def dump_code(code: Code) -> str:
    """Parenthesized prefix listing, e.g. ``(SEQ (APPLY p) (TREE 0))``."""
    if isinstance(code, Op):
        op = code.op
        if isinstance(op, Apply):
            return f"(APPLY {op.name})"
        args = [str(v) for v in op.__dict__.values()]
        return "(" + " ".join([_OP_NAMES[type(op)], *args]) + ")"
    if isinstance(code, CompRef):
        return f"(COMP {code.name})"
    if isinstance(code, Iter):
        return f"(ITER {code.m} {code.n} {code.p} {dump_code(code.body)})"
    if isinstance(code, Seq):
        return f"(SEQ {dump_code(code.l)} {dump_code(code.r)})"
    if isinstance(code, PairC):
        return f"(PAIR {dump_code(code.l)} {dump_code(code.r)})"
    if isinstance(code, PairIdx):
        return f"(PAIR {code.p} {code.q} {dump_code(code.l)} {dump_code(code.r)})"
    return f"(CASE {code.p} {code.q} {dump_code(code.l)} {dump_code(code.r)})"
