"""Exception hierarchy shared by every stage of the toolchain.

All errors raised on purpose by ``impg`` derive from :class:`ImpError`, so a
caller that only wants to distinguish "our" failures from programming bugs can
catch that single class. Execution failures are grouped under
:class:`ExecutionError`; the command-line driver maps that branch to its own
exit status.
"""

from __future__ import annotations

from typing import Any, FrozenSet, Optional, Sequence


class ImpError(Exception):
    """Base class for all toolchain errors."""


class ConfigError(ImpError):
    """A setting could not be parsed from the environment or a flag."""


class ImpSyntaxError(ImpError):
    """Program or data text does not match the grammar.

    Attributes:
        line: 1-based line of the offending token, when known.
        column: 1-based column of the offending token, when known.
        expected: Terminal names the parser would have accepted instead.
    """

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        expected: FrozenSet[str] = frozenset(),
    ) -> None:
        self.line = line
        self.column = column
        self.expected = expected
        where = f"line {line}, column {column}: " if line is not None else ""
        if expected:
            message = f"{message} (expected one of: {', '.join(sorted(expected))})"
        super().__init__(where + message)


class CompileError(ImpError):
    """No instantiation of an arrow exists at the requested domain and codomain.

    Attributes:
        arrow: The arrow that failed to compile.
        dom: Requested flat domain.
        cod: Requested flat codomain.
        definition: Name of the enclosing definition, when compiling a program.
    """

    def __init__(self, arrow: Any, dom: Any, cod: Any, definition: Optional[str] = None) -> None:
        self.arrow = arrow
        self.dom = dom
        self.cod = cod
        self.definition = definition
        from .objects import format_flat
        from .syntax import format_arrow

        prefix = f"in definition {definition}: " if definition else ""
        super().__init__(
            f"{prefix}cannot compile {format_arrow(arrow)} from {format_flat(dom)} to {format_flat(cod)}"
        )


class AmbiguityError(CompileError):
    """An arrow admits structurally different optimized compilations.

    Attributes:
        codes: The distinct optimized codes that were found.
    """

    def __init__(
        self, arrow: Any, dom: Any, cod: Any, codes: Sequence[Any], definition: Optional[str] = None
    ) -> None:
        super().__init__(arrow, dom, cod, definition)
        self.codes = tuple(codes)
        self.args = (f"{self.args[0]}: {len(self.codes)} distinct instantiations",)


class ExecutionError(ImpError):
    """Base class for failures while running compiled code."""


class BudgetExhausted(ExecutionError):
    """The iteration budget ran out (likely a nonterminating loop)."""

    def __init__(self, budget: int) -> None:
        self.budget = budget
        super().__init__(f"iteration budget of {budget} exhausted")


class InitReached(ExecutionError):
    """The initial map was executed, which only happens on ill-typed data."""

    def __init__(self) -> None:
        super().__init__("INIT reached: the initial map has no elements to act on")


class DispatchError(ExecutionError):
    """A library arrow was applied to a malformed datum or has no implementation."""


class IllTypedData(ExecutionError):
    """A case, distributivity or iteration instruction met a forest of the wrong shape."""


class UnresolvedName(ExecutionError):
    """A compiled reference names an arrow that was never compiled."""

    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"no compiled arrow named {name}")


class TypeMismatch(ImpError):
    """A value or arrow does not have the type the operation requires."""


class UninhabitedType(ImpError):
    """A value was requested from an object with no elements."""
