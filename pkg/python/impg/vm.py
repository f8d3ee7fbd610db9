"""Forest virtual machine.

Code runs on a work list instead of the host stack, so deep compositions and
long iterations never hit the recursion limit. The iteration budget bounds
the total number of loop-body applications across all nested loops, and the
nesting depth of compiled references.
"""

from __future__ import annotations

import logging
from typing import List, Optional, Tuple, Union

from .code import (
    Apply, CaseC, Code, CompRef, Dist3, Dist4, Init, Inj1, Inj2, Iter, LeftDel, Nop, Op, PairC, PairIdx, Proj1,
    Proj2, RightDel, Seq, Term, Tree, dump_code,
)
from .compiler import CompiledProgram, compile_program
from .config import DEFAULT_BUDGET
from .errors import BudgetExhausted, CompileError, IllTypedData, InitReached, UnresolvedName
from .forest import Forest, Node, format_forest, mk_node
from .signature import Diagnostic
from .syntax import Program
from .typecheck import tc_program

logger = logging.getLogger(__name__)

_EVAL, _THEN, _JOIN, _LOOP, _RETURN = range(5)


def _single_node(d: Forest, what: str) -> Node:
    if len(d) != 1 or not isinstance(d[0], Node):
        raise IllTypedData(f"{what} expects one tagged tree, got {format_forest(d) or 'the empty forest'}")
    return d[0]


def _dist(q: int, q2: int, n: int, d: Forest) -> Forest:
    if not d or not isinstance(d[-1], Node):
        raise IllTypedData(f"DIST expects a tagged last tree, got {format_forest(d) or 'the empty forest'}")
    prefix, last = d[:-1], d[-1]
    m = last.tag
    if m < q:
        if q != 1:
            return (mk_node(0, d),)
        return (mk_node(0, prefix + last.children),)
    if m - q >= q2:
        raise IllTypedData(f"DIST tag {m} out of range for {q} + {q2} summands")
    if q2 != 1:
        return (mk_node(n, prefix + (mk_node(m - q, last.children),)),)
    return (mk_node(n, prefix + last.children),)


def apply_basic(op, d: Forest, program: Optional[CompiledProgram] = None) -> Forest:
    """One basic instruction, lowered or not."""
    if isinstance(op, Nop):
        return d
    if isinstance(op, Tree):
        return (mk_node(op.n, d),)
    if isinstance(op, Term):
        return ()
    if isinstance(op, Init):
        raise InitReached()
    if isinstance(op, RightDel):
        return d[: len(d) - op.n]
    if isinstance(op, LeftDel):
        return d[op.n:]
    if isinstance(op, Dist3):
        return _dist(op.q, op.q2, op.n, d)
    if isinstance(op, Apply):
        if program is None:
            from .stdlib import dispatch

            return tuple(dispatch(op.name, d))
        return tuple(program.apply(op.name, d))
    # unlowered forms behave as their peephole rewrite
    if isinstance(op, Inj1):
        if op.p == 0:
            raise InitReached()
        return d if op.q == 0 else (mk_node(0, d),)
    if isinstance(op, Inj2):
        if op.q == 0:
            raise InitReached()
        return d if op.p == 0 else (mk_node(op.p, d),)
    if isinstance(op, Proj1):
        if op.p == 0:
            return ()
        return d if op.q == 0 else d[: len(d) - op.q]
    if isinstance(op, Proj2):
        if op.q == 0:
            return ()
        return d if op.p == 0 else d[op.p:]
    if isinstance(op, Dist4):
        if op.p == 0:
            return d
        if op.q == 0:
            return (mk_node(1, d),)
        if op.q2 == 0:
            return (mk_node(0, d),)
        return _dist(op.q, op.q2, op.n, d)
    raise TypeError(f"not a basic instruction: {op!r}")


class Machine:
    """Executes code against one compiled program.

    Attributes:
        steps: Loop-body applications performed so far.
        max_depth: Deepest nesting of compiled references reached.
    """

    def __init__(
        self, program: Optional[CompiledProgram] = None, budget: int = DEFAULT_BUDGET, *, trace: bool = False
    ) -> None:
        self.program = program
        self.budget = budget
        self.trace = trace
        self.steps = 0
        self.max_depth = 0
        self._depth = 0

    def _spend(self) -> None:
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExhausted(self.budget)

    def _log(self, rule: str, d: Forest) -> None:
        if self.trace:
            logger.debug("%s on %s", rule, format_forest(d) or "()")

    def code_of(self, name: str) -> Code:
        if self.program is None:
            raise UnresolvedName(name)
        return code_of(name, self.program)

    def run(self, code: Code, d: Forest) -> Forest:
        """Run ``code`` on ``d`` and return the resulting forest."""
        tasks: List[Tuple[int, object, object]] = [(_EVAL, code, tuple(d))]
        values: List[Forest] = []
        while tasks:
            kind, a, b = tasks.pop()
            if kind == _EVAL:
                self._eval(a, b, tasks, values)
            elif kind == _THEN:
                tasks.append((_EVAL, a, values.pop()))
            elif kind == _JOIN:
                right = values.pop()
                values.append(values.pop() + right)
            elif kind == _LOOP:
                self._loop(a, values.pop(), tasks, values)
            else:
                self._depth -= 1
        return values.pop()

    def _eval(self, code: Code, d: Forest, tasks: list, values: list) -> None:
        if isinstance(code, Op):
            if self.trace:
                logger.debug("%s on %s", dump_code(code), format_forest(d) or "()")
            values.append(apply_basic(code.op, d, self.program))
        elif isinstance(code, Seq):
            tasks.append((_THEN, code.r, None))
            tasks.append((_EVAL, code.l, d))
        elif isinstance(code, PairC):
            self._pair(code.l, code.r, d, tasks)
        elif isinstance(code, PairIdx):
            if code.p == 0:
                tasks.append((_EVAL, code.r, d))
            elif code.q == 0:
                tasks.append((_EVAL, code.l, d))
            else:
                self._pair(code.l, code.r, d, tasks)
        elif isinstance(code, CaseC):
            tasks.append(self._case(code, d))
        elif isinstance(code, CompRef):
            self._depth += 1
            self.max_depth = max(self.max_depth, self._depth)
            if self._depth > self.budget:
                raise BudgetExhausted(self.budget)
            self._log(f"COMP {code.name}", d)
            tasks.append((_RETURN, None, None))
            tasks.append((_EVAL, self.code_of(code.name), d))
        elif isinstance(code, Iter):
            if code.m == 0:
                raise InitReached()
            if code.n == 0:
                tasks.append((_EVAL, code.body, d))
                return
            self._spend()
            self._log("ITER enter", d)
            tasks.append((_LOOP, code, None))
            tasks.append((_EVAL, code.body, (mk_node(0, d),)))
        else:
            raise TypeError(f"not code: {code!r}")

    @staticmethod
    def _pair(l: Code, r: Code, d: Forest, tasks: list) -> None:
        tasks.append((_JOIN, None, None))
        tasks.append((_EVAL, r, d))
        tasks.append((_EVAL, l, d))

    def _case(self, code: CaseC, d: Forest) -> Tuple[int, Code, Forest]:
        if code.p == 0:
            return (_EVAL, code.r, d)
        if code.q == 0:
            return (_EVAL, code.l, d)
        node = _single_node(d, "CASE")
        tag = node.tag
        if tag < code.p:
            self._log(f"CASE left {tag}", d)
            if code.p != 1:
                return (_EVAL, code.l, d)
            return (_EVAL, code.l, node.children)
        k = tag - code.p
        if k >= code.q:
            raise IllTypedData(f"CASE tag {tag} out of range for {code.p} + {code.q} summands")
        self._log(f"CASE right {k}", d)
        if code.q != 1:
            return (_EVAL, code.r, (mk_node(k, node.children),))
        return (_EVAL, code.r, node.children)

    def _loop(self, code: Iter, out: Forest, tasks: list, values: list) -> None:
        node = _single_node(out, "ITER")
        q = node.tag
        if q < code.n:
            self._spend()
            self._log(f"ITER again {q}", out)
            tasks.append((_LOOP, code, None))
            tasks.append((_EVAL, code.body, (mk_node(q + code.m, node.children),)))
            return
        k = q - code.n
        if k >= code.p:
            raise IllTypedData(f"ITER tag {q} out of range for {code.n} + {code.p} summands")
        self._log(f"ITER exit {k}", out)
        if code.p == 1:
            values.append(node.children)
        else:
            values.append((mk_node(k, node.children),))


def code_of(name: str, program: CompiledProgram) -> Code:
    """The code bound to ``name``.

    Raises:
        UnresolvedName: If no definition of that name was compiled.
    """
    code = program.code_of(name)
    if code is None:
        raise UnresolvedName(name)
    return code


def execute(
    code: Code,
    d: Forest,
    program: Optional[CompiledProgram] = None,
    budget: int = DEFAULT_BUDGET,
    *,
    trace: bool = False,
) -> Forest:
    """Run ``code`` on ``d``; see :class:`Machine`."""
    return Machine(program, budget, trace=trace).run(code, d)


def run_arrow(
    name: str,
    d: Forest,
    p: Program,
    budget: int = DEFAULT_BUDGET,
    *,
    optimize: bool = True,
    exhaustive: bool = False,
    trace: bool = False,
) -> Union[Forest, List[Diagnostic]]:
    """Compile ``p`` and run definition ``name`` on ``d``.

    Returns:
        The output forest (a tuple), or the checker's diagnostics (a list)
        when the program does not compile.
    """
    try:
        compiled = compile_program(p, exhaustive=exhaustive, optimize=optimize)
    except CompileError as exc:
        logger.info("compilation failed, reporting diagnostics: %s", exc)
        return tc_program(p, exhaustive=exhaustive)
    machine = Machine(compiled, budget, trace=trace)
    result = machine.run(CompRef(name), d)
    logger.info("%s finished after %d loop iterations", name, machine.steps)
    return result
