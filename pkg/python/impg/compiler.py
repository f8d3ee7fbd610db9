"""Type-directed compilation of arrows to VM code.

An arrow is compiled against a flat domain and codomain. Polymorphic
structural arrows are instantiated by matching the requested objects, and
the operators split the relevant object list at every position until the
children compile. The search is a backtracking enumeration with a fixed
order (split points by increasing prefix length, codomain of the left factor
of a composition before domain of the right one), memoized on
``(arrow, dom, cod)``.

Every solution comes with the *elaborated* arrow: the input arrow with each
structural arrow and call fully annotated with the objects chosen for it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Mapping, NamedTuple, Optional, Tuple

from . import domcod
from .code import (
    Apply, CaseC, Code, CompRef, Dist4, Init, Inj1, Inj2, Iter, Nop, Op, PairIdx, Proj1, Proj2, Seq, Term,
    code_size, peephole,
)
from .errors import AmbiguityError, CompileError
from .objects import (
    EMPTY, UNIT, FlatObj, ProdList, SumList, as_prod, as_sum, flatten, plen, rebuild_prod, rebuild_sum, slen,
    to_obj,
)
from .signature import ArrowKind, Entry, Signature
from .stdlib import Apply as ApplyFn
from .stdlib import dispatch
from .syntax import (
    ArrBang, ArrCall, ArrCase, ArrDist, ArrId, ArrInj1, ArrInj2, ArrName, ArrowExpr, ArrPair, ArrProd,
    ArrProj1, ArrProj2, ArrSeq, ArrSum, ArrTerm, Def, ObjExpr, Program, format_arrow,
)

logger = logging.getLogger(__name__)


class Solution(NamedTuple):
    code: Code
    arrow: ArrowExpr


class Compiler:
    """Compiles arrows against one signature.

    Args:
        signature: Declared library and defined arrows.
        exhaustive: Enumerate every instantiation instead of stopping at the
            first one; solutions are deduplicated by optimized code.
    """

    def __init__(self, signature: Signature, *, exhaustive: bool = False) -> None:
        self.signature = signature
        self.exhaustive = exhaustive
        self._memo: Dict[Tuple[ArrowExpr, FlatObj, FlatObj], Tuple[Solution, ...]] = {}

    def solutions(self, f: ArrowExpr, dom: FlatObj, cod: FlatObj) -> Tuple[Solution, ...]:
        key = (f, dom, cod)
        found = self._memo.get(key)
        if found is None:
            if self.exhaustive:
                unique: Dict[Code, Solution] = {}
                for solution in self._rules(f, dom, cod):
                    unique.setdefault(peephole(solution.code), solution)
                found = tuple(unique.values())
            else:
                found = tuple(_take_first(self._rules(f, dom, cod)))
            self._memo[key] = found
        return found

    def first(self, f: ArrowExpr, dom: FlatObj, cod: FlatObj) -> Optional[Solution]:
        found = self.solutions(f, dom, cod)
        return found[0] if found else None

    # -- rules -------------------------------------------------------------

    def _rules(self, f: ArrowExpr, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        if isinstance(f, ArrName):
            yield from self._basic(f, dom, cod)
        elif isinstance(f, ArrId):
            if f.obj is None:
                if dom == cod and dom not in (EMPTY, UNIT):
                    yield Solution(Op(Nop()), ArrId(to_obj(dom)))
            elif flatten(f.obj) == dom == cod:
                yield Solution(Op(Nop()), f)
        elif isinstance(f, (ArrInj1, ArrInj2)):
            yield from self._injection(f, dom, cod)
        elif isinstance(f, (ArrProj1, ArrProj2)):
            yield from self._projection(f, dom, cod)
        elif isinstance(f, ArrBang):
            if f.obj is None:
                if dom == EMPTY and cod != EMPTY:
                    yield Solution(Op(Init()), ArrBang(to_obj(cod)))
            elif dom == EMPTY and flatten(f.obj) == cod:
                yield Solution(Op(Init()), f)
        elif isinstance(f, ArrTerm):
            if f.obj is None:
                if cod == UNIT and dom != UNIT:
                    yield Solution(Op(Term()), ArrTerm(to_obj(dom)))
            elif cod == UNIT and flatten(f.obj) == dom:
                yield Solution(Op(Term()), f)
        elif isinstance(f, ArrDist):
            yield from self._dist(f, dom, cod)
        elif isinstance(f, ArrSum):
            yield from self._sum(f, dom, cod)
        elif isinstance(f, ArrProd):
            yield from self._prod(f, dom, cod)
        elif isinstance(f, ArrCase):
            yield from self._case(f, dom, cod)
        elif isinstance(f, ArrPair):
            yield from self._pair(f, dom, cod)
        elif isinstance(f, ArrSeq):
            yield from self._seq(f, dom, cod)
        elif isinstance(f, ArrCall):
            yield from self._call(f, dom, cod)
        else:
            raise TypeError(f"not an arrow expression: {f!r}")

    def _basic(self, f: ArrName, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        entry = self.signature.spec_of(f.name)
        if entry is None or entry.dom != dom or entry.cod != cod:
            return
        code = Op(Apply(f.name)) if entry.kind is ArrowKind.LIBRARY else CompRef(f.name)
        yield Solution(code, f)

    def _injection(self, f, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        first = isinstance(f, ArrInj1)
        if f.objs is not None:
            x, y = flatten(f.objs[0]), flatten(f.objs[1])
            if (x if first else y) == dom and rebuild_sum([x, y]) == cod:
                cls = Inj1 if first else Inj2
                yield Solution(Op(cls(slen(x), slen(y))), f)
            return
        part, whole = as_sum(dom), as_sum(cod)
        k = len(part)
        if not part or len(whole) <= k:
            return
        if first and whole[:k] == part:
            rest = whole[k:]
            yield Solution(Op(Inj1(k, len(rest))), ArrInj1((to_obj(dom), to_obj(rebuild_sum(rest)))))
        elif not first and whole[-k:] == part:
            rest = whole[:-k]
            yield Solution(Op(Inj2(len(rest), k)), ArrInj2((to_obj(rebuild_sum(rest)), to_obj(dom))))

    def _projection(self, f, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        first = isinstance(f, ArrProj1)
        if f.objs is not None:
            x, y = flatten(f.objs[0]), flatten(f.objs[1])
            if (x if first else y) == cod and rebuild_prod([x, y]) == dom:
                cls = Proj1 if first else Proj2
                yield Solution(Op(cls(plen(x), plen(y))), f)
            return
        part, whole = as_prod(cod), as_prod(dom)
        k = len(part)
        if not part or len(whole) <= k:
            return
        if first and whole[:k] == part:
            rest = whole[k:]
            yield Solution(Op(Proj1(k, len(rest))), ArrProj1((to_obj(cod), to_obj(rebuild_prod(rest)))))
        elif not first and whole[-k:] == part:
            rest = whole[:-k]
            yield Solution(Op(Proj2(len(rest), k)), ArrProj2((to_obj(rebuild_prod(rest)), to_obj(cod))))

    def _dist(self, f: ArrDist, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        if f.objs is not None:
            x, y1, y2 = (flatten(o) for o in f.objs)
            left, right = rebuild_prod([x, y1]), rebuild_prod([x, y2])
            if dom == rebuild_prod([x, rebuild_sum([y1, y2])]) and cod == rebuild_sum([left, right]):
                yield Solution(Op(Dist4(plen(x), slen(y1), slen(y2), slen(left))), f)
            return
        if not isinstance(dom, ProdList) or len(dom.items) < 2 or not isinstance(dom.items[-1], SumList):
            return
        factors, summands = dom.items[:-1], dom.items[-1].items
        target = as_sum(cod)
        for k in range(1, len(summands)):
            first, second = rebuild_sum(summands[:k]), rebuild_sum(summands[k:])
            left = as_sum(rebuild_prod(factors + (first,)))
            right = as_sum(rebuild_prod(factors + (second,)))
            if target == left + right:
                annotation = (to_obj(rebuild_prod(factors)), to_obj(first), to_obj(second))
                yield Solution(Op(Dist4(len(factors), k, len(summands) - k, len(left))), ArrDist(annotation))

    def _sum(self, f: ArrSum, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        ins, outs = as_sum(dom), as_sum(cod)
        for i in range(len(ins) + 1):
            for j in range(len(outs) + 1):
                lefts = self.solutions(f.left, rebuild_sum(ins[:i]), rebuild_sum(outs[:j]))
                if not lefts:
                    continue
                rights = self.solutions(f.right, rebuild_sum(ins[i:]), rebuild_sum(outs[j:]))
                p, q = j, len(outs) - j
                for a in lefts:
                    for b in rights:
                        code = CaseC(Seq(a.code, Op(Inj1(p, q))), i, len(ins) - i, Seq(b.code, Op(Inj2(p, q))))
                        yield Solution(code, ArrSum(a.arrow, b.arrow))

    def _prod(self, f: ArrProd, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        ins, outs = as_prod(dom), as_prod(cod)
        for i in range(len(ins) + 1):
            for j in range(len(outs) + 1):
                lefts = self.solutions(f.left, rebuild_prod(ins[:i]), rebuild_prod(outs[:j]))
                if not lefts:
                    continue
                rights = self.solutions(f.right, rebuild_prod(ins[i:]), rebuild_prod(outs[j:]))
                p, q = i, len(ins) - i
                for a in lefts:
                    for b in rights:
                        code = PairIdx(Seq(Op(Proj1(p, q)), a.code), j, len(outs) - j, Seq(Op(Proj2(p, q)), b.code))
                        yield Solution(code, ArrProd(a.arrow, b.arrow))

    def _case(self, f: ArrCase, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        ins = as_sum(dom)
        for i in range(len(ins) + 1):
            lefts = self.solutions(f.left, rebuild_sum(ins[:i]), cod)
            if not lefts:
                continue
            rights = self.solutions(f.right, rebuild_sum(ins[i:]), cod)
            for a in lefts:
                for b in rights:
                    yield Solution(CaseC(a.code, i, len(ins) - i, b.code), ArrCase(a.arrow, b.arrow))

    def _pair(self, f: ArrPair, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        outs = as_prod(cod)
        for j in range(len(outs) + 1):
            lefts = self.solutions(f.left, dom, rebuild_prod(outs[:j]))
            if not lefts:
                continue
            rights = self.solutions(f.right, dom, rebuild_prod(outs[j:]))
            for a in lefts:
                for b in rights:
                    yield Solution(PairIdx(a.code, j, len(outs) - j, b.code), ArrPair(a.arrow, b.arrow))

    def _seq(self, f: ArrSeq, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        middles: List[FlatObj] = []
        for middle in (domcod.cod(f.first, self.signature), domcod.dom(f.then, self.signature)):
            if middle is not None and middle not in middles:
                middles.append(middle)
        for middle in middles:
            firsts = self.solutions(f.first, dom, middle)
            if not firsts:
                continue
            for a in firsts:
                for b in self.solutions(f.then, middle, cod):
                    yield Solution(Seq(a.code, b.code), ArrSeq(a.arrow, b.arrow))

    def _call(self, f: ArrCall, dom: FlatObj, cod: FlatObj) -> Iterator[Solution]:
        if cod == EMPTY:
            return
        if f.objs is not None:
            x, u, y = (flatten(o) for o in f.objs)
            if x != dom or y != cod:
                return
            for a in self.solutions(f.body, rebuild_sum([x, u]), rebuild_sum([u, y])):
                yield Solution(Iter(a.code, slen(x), slen(u), slen(y)), ArrCall(f.objs, a.arrow))
            return
        inputs = as_sum(dom)
        body_dom = domcod.dom(f.body, self.signature)
        if inputs and body_dom is not None:
            items = as_sum(body_dom)
            k = len(inputs)
            if len(items) > k and items[:k] == inputs:
                local = items[k:]
                target = rebuild_sum(local + (cod,))
                annotation = (to_obj(dom), to_obj(rebuild_sum(local)), to_obj(cod))
                for a in self.solutions(f.body, body_dom, target):
                    yield Solution(Iter(a.code, k, len(local), slen(cod)), ArrCall(annotation, a.arrow))
        outputs = as_sum(cod)
        body_cod = domcod.cod(f.body, self.signature)
        if body_cod is not None:
            items = as_sum(body_cod)
            k = len(outputs)
            if len(items) > k and items[-k:] == outputs:
                local = items[:-k]
                source = rebuild_sum((dom,) + local)
                annotation = (to_obj(dom), to_obj(rebuild_sum(local)), to_obj(cod))
                for a in self.solutions(f.body, source, body_cod):
                    yield Solution(Iter(a.code, slen(dom), len(local), k), ArrCall(annotation, a.arrow))


def _take_first(solutions: Iterator[Solution]) -> List[Solution]:
    for solution in solutions:
        return [solution]
    return []


def compile_solutions(
    f: ArrowExpr, dom: FlatObj, cod: FlatObj, sig: Signature, *, exhaustive: bool = False
) -> Tuple[Solution, ...]:
    """All solutions (exhaustive) or the first one, unoptimized."""
    return Compiler(sig, exhaustive=exhaustive).solutions(f, dom, cod)


def compile_arrow(
    f: ArrowExpr,
    dom: FlatObj,
    cod: FlatObj,
    sig: Signature,
    *,
    exhaustive: bool = False,
    optimize: bool = True,
    compiler: Optional[Compiler] = None,
) -> Code:
    """Compile ``f`` from ``dom`` to ``cod``.

    Raises:
        CompileError: If no instantiation exists.
        AmbiguityError: In exhaustive mode, if two instantiations give
            different optimized code.
    """
    raw, optimized, _ = _compile(f, dom, cod, sig, exhaustive, compiler)
    return optimized if optimize else raw


def _compile(f, dom, cod, sig, exhaustive, compiler) -> Tuple[Code, Code, ArrowExpr]:
    compiler = compiler or Compiler(sig, exhaustive=exhaustive)
    found = compiler.solutions(f, dom, cod)
    if not found:
        raise CompileError(f, dom, cod)
    if len(found) > 1:
        raise AmbiguityError(f, dom, cod, [peephole(s.code) for s in found])
    code, arrow = found[0]
    optimized = peephole(code)
    logger.debug("compiled %s to %d instructions", format_arrow(f), code_size(optimized))
    return code, optimized, arrow


def elaborate(f: ArrowExpr, dom: FlatObj, cod: FlatObj, sig: Signature) -> ArrowExpr:
    """The fully annotated arrow recording the instantiation the compiler picks."""
    return _compile(f, dom, cod, sig, False, None)[2]


# -- programs ------------------------------------------------------------------


@dataclass(frozen=True)
class CompiledDef:
    """One compiled definition.

    Attributes:
        name: Definition name.
        code: Code, optimized unless the program was compiled without it.
        arrow: Elaborated step chain.
        dom: Declared domain.
        cod: Declared codomain (object after the last step).
    """

    name: str
    code: Code
    arrow: ArrowExpr
    dom: ObjExpr
    cod: ObjExpr


@dataclass(frozen=True)
class CompiledProgram:
    program: Program
    signature: Signature
    defs: Tuple[CompiledDef, ...]
    bindings: Mapping[str, ApplyFn]

    def code_of(self, name: str) -> Optional[Code]:
        compiled = self.find(name)
        return None if compiled is None else compiled.code

    def find(self, name: str) -> Optional[CompiledDef]:
        return next((d for d in self.defs if d.name == name), None)

    def apply(self, name: str, d):
        bound = self.bindings.get(name)
        if bound is not None:
            return bound(name, d)
        return dispatch(name, d)

    def arrow_types(self) -> Dict[str, Tuple[ObjExpr, ObjExpr]]:
        """Declared object types of every library and defined arrow."""
        types = {r.name: (r.dom, r.cod) for r in reversed(self.program.refs)}
        for compiled in self.defs:
            types.setdefault(compiled.name, (compiled.dom, compiled.cod))
        return types


def library_signature(p: Program) -> Signature:
    return Signature(Entry(r.name, flatten(r.dom), flatten(r.cod), ArrowKind.LIBRARY) for r in p.refs)


def compile_def(d: Def, sig: Signature, *, exhaustive: bool = False, optimize: bool = True) -> CompiledDef:
    """Compile a definition's steps, each at its declared objects.

    Raises:
        CompileError: Naming the definition, for the first failing step.
    """
    compiler = Compiler(sig, exhaustive=exhaustive)
    codes: List[Code] = []
    arrows: List[ArrowExpr] = []
    here = d.dom
    for step in d.steps:
        try:
            raw, optimized, arrow = _compile(step.arrow, flatten(here), flatten(step.cod), sig, exhaustive, compiler)
        except CompileError as exc:
            exc.definition = d.name
            exc.args = (f"in definition {d.name}: {exc.args[0]}",)
            raise
        codes.append(optimized if optimize else raw)
        arrows.append(arrow)
        here = step.cod
    code, arrow = codes[-1], arrows[-1]
    for step_code, step_arrow in zip(reversed(codes[:-1]), reversed(arrows[:-1])):
        code = Seq(step_code, code)
        arrow = ArrSeq(step_arrow, arrow)
    if optimize:
        code = peephole(code)
    return CompiledDef(d.name, code, arrow, d.dom, d.cod)


def _bindings(p: Program) -> Dict[str, ApplyFn]:
    from .stdlib import find_provider

    bound: Dict[str, ApplyFn] = {}
    for ref in p.refs:
        library = find_provider(ref.name)
        if library is None:
            logger.warning("no library implements %s; applying it will fail", ref.name)
            continue
        dom, cod = library.signature[ref.name]
        if (dom, cod) != (flatten(ref.dom), flatten(ref.cod)):
            logger.warning("declared type of %s differs from library %s", ref.name, library.name)
        bound.setdefault(ref.name, library.apply)
    return bound


def compile_program(p: Program, *, exhaustive: bool = False, optimize: bool = True) -> CompiledProgram:
    """Compile every definition in order; earlier ones are visible to later ones.

    Raises:
        CompileError: For the first definition that cannot be compiled.
    """
    sig = library_signature(p)
    compiled: List[CompiledDef] = []
    for d in p.defs:
        result = compile_def(d, sig, exhaustive=exhaustive, optimize=optimize)
        compiled.append(result)
        sig = sig.extend(Entry(d.name, flatten(d.dom), flatten(d.cod), ArrowKind.DEFINED))
        logger.info("compiled definition %s", d.name)
    return CompiledProgram(p, library_signature(p), tuple(compiled), _bindings(p))
