"""Abstract syntax, parser and printer for program text and data literals.

Parsing is done with a lark LALR grammar shipped next to this module
(``impg.lark``). The printer emits the minimum parentheses needed for the
text to parse back to an equal tree.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Optional, Tuple, Union

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken, VisitError

from .errors import ImpSyntaxError

logger = logging.getLogger(__name__)


# -- objects ---------------------------------------------------------------


@dataclass(frozen=True)
class ObjName:
    name: str


@dataclass(frozen=True)
class ObjI:
    """The terminal object ``I``."""


@dataclass(frozen=True)
class ObjO:
    """The initial object ``O``."""


@dataclass(frozen=True)
class ObjSum:
    left: "ObjExpr"
    right: "ObjExpr"


@dataclass(frozen=True)
class ObjProd:
    left: "ObjExpr"
    right: "ObjExpr"


ObjExpr = Union[ObjName, ObjI, ObjO, ObjSum, ObjProd]
ObjPair = Tuple[ObjExpr, ObjExpr]
ObjTriple = Tuple[ObjExpr, ObjExpr, ObjExpr]


# -- arrows ----------------------------------------------------------------
#
# Structural arrows carry their object annotation, or None when polymorphic.


@dataclass(frozen=True)
class ArrName:
    name: str


@dataclass(frozen=True)
class ArrId:
    obj: Optional[ObjExpr] = None


@dataclass(frozen=True)
class ArrInj1:
    objs: Optional[ObjPair] = None


@dataclass(frozen=True)
class ArrInj2:
    objs: Optional[ObjPair] = None


@dataclass(frozen=True)
class ArrProj1:
    objs: Optional[ObjPair] = None


@dataclass(frozen=True)
class ArrProj2:
    objs: Optional[ObjPair] = None


@dataclass(frozen=True)
class ArrBang:
    """The initial map ``!`` out of ``O``."""

    obj: Optional[ObjExpr] = None


@dataclass(frozen=True)
class ArrTerm:
    """The terminal map ``term`` into ``I``."""

    obj: Optional[ObjExpr] = None


@dataclass(frozen=True)
class ArrDist:
    """Inverse distributivity ``X * (Y1 + Y2) -> X * Y1 + X * Y2``."""

    objs: Optional[ObjTriple] = None


@dataclass(frozen=True)
class ArrSum:
    left: "ArrowExpr"
    right: "ArrowExpr"


@dataclass(frozen=True)
class ArrProd:
    left: "ArrowExpr"
    right: "ArrowExpr"


@dataclass(frozen=True)
class ArrCase:
    left: "ArrowExpr"
    right: "ArrowExpr"


@dataclass(frozen=True)
class ArrPair:
    left: "ArrowExpr"
    right: "ArrowExpr"


@dataclass(frozen=True)
class ArrSeq:
    """``first`` then ``then``."""

    first: "ArrowExpr"
    then: "ArrowExpr"


@dataclass(frozen=True)
class ArrCall:
    """Iteration of ``body : X + U -> U + Y`` seen as an arrow ``X -> Y``.

    ``objs`` is ``(X, U, Y)`` or None when the spaces are to be inferred.
    """

    objs: Optional[ObjTriple]
    body: "ArrowExpr"


ArrowExpr = Union[
    ArrName, ArrId, ArrInj1, ArrInj2, ArrProj1, ArrProj2, ArrBang, ArrTerm, ArrDist,
    ArrSum, ArrProd, ArrCase, ArrPair, ArrSeq, ArrCall,
]

STRUCTURAL = (ArrId, ArrInj1, ArrInj2, ArrProj1, ArrProj2, ArrBang, ArrTerm, ArrDist)
BINARY = (ArrSum, ArrProd, ArrCase, ArrPair, ArrSeq)


def children(f: ArrowExpr) -> Tuple[ArrowExpr, ...]:
    """Immediate sub-arrows of ``f``."""
    if isinstance(f, ArrSeq):
        return (f.first, f.then)
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, ArrCall):
        return (f.body,)
    return ()


def contains_call(f: ArrowExpr) -> bool:
    return isinstance(f, ArrCall) or any(contains_call(c) for c in children(f))


# -- programs --------------------------------------------------------------


@dataclass(frozen=True)
class Span:
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Ref:
    name: str
    dom: ObjExpr
    cod: ObjExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Step:
    arrow: ArrowExpr
    cod: ObjExpr
    span: Optional[Span] = field(default=None, compare=False)


@dataclass(frozen=True)
class Def:
    name: str
    dom: ObjExpr
    steps: Tuple[Step, ...]
    span: Optional[Span] = field(default=None, compare=False)

    @property
    def cod(self) -> ObjExpr:
        return self.steps[-1].cod

    def arrow(self) -> ArrowExpr:
        """The step chain as one right-nested composition."""
        result = self.steps[-1].arrow
        for step in reversed(self.steps[:-1]):
            result = ArrSeq(step.arrow, result)
        return result


@dataclass(frozen=True)
class Program:
    objects: Tuple[str, ...] = ()
    refs: Tuple[Ref, ...] = ()
    defs: Tuple[Def, ...] = ()

    def find_def(self, name: str) -> Optional[Def]:
        return next((d for d in self.defs if d.name == name), None)

    def find_ref(self, name: str) -> Optional[Ref]:
        return next((r for r in self.refs if r.name == name), None)


# -- parsing ---------------------------------------------------------------


def _span(meta) -> Optional[Span]:
    if getattr(meta, "empty", True):
        return None
    return Span(meta.line, meta.column)


def _annotation(args, arity: int):
    if not args:
        return None
    if len(args) != arity:
        raise ValueError(f"expected {arity} object annotations, got {len(args)}")
    return args[0] if arity == 1 else tuple(args)


@v_args(inline=True)
class _ToAst(Transformer):
    def start(self, objects, refs, defs):
        return Program(objects, refs, defs)

    def objects(self, *names):
        return tuple(str(n) for n in names)

    def libs(self, *refs):
        return tuple(refs)

    def defs(self, *defs):
        return tuple(defs)

    @v_args(meta=True)
    def ref(self, meta, items):
        name, dom, _, cod = items
        return Ref(str(name), dom, cod, _span(meta))

    @v_args(meta=True)
    def definition(self, meta, items):
        name, dom, *steps = items
        return Def(str(name), dom, tuple(steps), _span(meta))

    @v_args(meta=True)
    def step(self, meta, items):
        _, arrow, _, cod = items
        return Step(arrow, cod, _span(meta))

    def obj_name(self, token):
        return ObjName(str(token))

    def obj_terminal(self):
        return ObjI()

    def obj_initial(self):
        return ObjO()

    def obj_sum(self, left, right):
        return ObjSum(left, right)

    def obj_times(self, left, right):
        return ObjProd(left, right)

    def arr_name(self, token):
        return ArrName(str(token))

    def arr_id(self, *objs):
        return ArrId(_annotation(objs, 1))

    def arr_inj1(self, *objs):
        return ArrInj1(_annotation(objs, 2))

    def arr_inj2(self, *objs):
        return ArrInj2(_annotation(objs, 2))

    def arr_proj1(self, *objs):
        return ArrProj1(_annotation(objs, 2))

    def arr_proj2(self, *objs):
        return ArrProj2(_annotation(objs, 2))

    def arr_bang(self, *objs):
        return ArrBang(_annotation(objs, 1))

    def arr_term(self, *objs):
        return ArrTerm(_annotation(objs, 1))

    def arr_dist(self, *objs):
        return ArrDist(_annotation(objs, 3))

    def arr_call(self, *items):
        *objs, body = items
        return ArrCall(_annotation(objs, 3), body)

    def arr_case(self, left, right):
        return ArrCase(left, right)

    def arr_pair(self, left, right):
        return ArrPair(left, right)

    def arr_seq(self, first, then):
        return ArrSeq(first, then)

    def arr_sum(self, left, right):
        return ArrSum(left, right)

    def arr_prod(self, left, right):
        return ArrProd(left, right)

    def arr_compose(self, outer, inner):
        return ArrSeq(inner, outer)


_DATA_GRAMMAR = r"""
start: tree*
?tree: "<" NAT "," tree* ">" -> node
     | "{" NAT "}"           -> leaf
     | NAT                   -> leaf
NAT: /[0-9]+/
%import common.WS
%ignore WS
"""


@lru_cache(maxsize=None)
def _program_parser() -> Lark:
    grammar = resources.files(__package__).joinpath("impg.lark").read_text(encoding="ascii")
    return Lark(grammar, parser="lalr", propagate_positions=True, maybe_placeholders=False)


@lru_cache(maxsize=None)
def _data_parser() -> Lark:
    return Lark(_DATA_GRAMMAR, parser="lalr")


_DART_HINT = "a dart is written --f--> with no space before '>'"


def _is_broken_dart(exc: UnexpectedInput) -> bool:
    if isinstance(exc, UnexpectedCharacters):
        return exc.char in (">", "-")
    token = getattr(exc, "token", None)
    return isinstance(token, Token) and bool(str(token)) and set(str(token)) == {"-"}


def _syntax_error(exc: UnexpectedInput, darts: bool = False) -> ImpSyntaxError:
    expected: frozenset = frozenset()
    if isinstance(exc, (UnexpectedToken, UnexpectedEOF)):
        expected = frozenset(exc.expected)
    elif isinstance(exc, UnexpectedCharacters):
        expected = frozenset(exc.allowed or ())
    token = getattr(exc, "token", None)
    if isinstance(exc, UnexpectedEOF) or (isinstance(token, Token) and token.type == "$END"):
        message = "unexpected end of input"
    elif isinstance(exc, UnexpectedCharacters):
        message = f"unexpected character {exc.char!r}"
    else:
        message = f"unexpected token {str(token)!r}"
    if darts and _is_broken_dart(exc):
        message = f"{message}; {_DART_HINT}"
    line = getattr(exc, "line", None)
    column = getattr(exc, "column", None)
    if line is not None and line < 0:
        line = column = None
    return ImpSyntaxError(message, line, column, expected)


def _parse(parser: Lark, text: str, transformer: Transformer, darts: bool = False):
    try:
        text.encode("ascii")
    except UnicodeEncodeError as exc:
        raise ImpSyntaxError(f"non-ASCII character at offset {exc.start}") from None
    try:
        tree = parser.parse(text)
    except UnexpectedInput as exc:
        raise _syntax_error(exc, darts) from None
    try:
        return transformer.transform(tree)
    except VisitError as exc:
        raise ImpSyntaxError(str(exc.orig_exc)) from exc.orig_exc


def parse_program(text: str) -> Program:
    """Parse program text.

    Raises:
        ImpSyntaxError: On any lexical or grammatical error.
    """
    program = _parse(_program_parser(), text, _ToAst(), darts=True)
    logger.debug(
        "parsed %d objects, %d refs, %d defs",
        len(program.objects), len(program.refs), len(program.defs),
    )
    return program


class _ToForest(Transformer):
    def __init__(self, parse_datum: Callable[[str], object]) -> None:
        super().__init__()
        self._parse_datum = parse_datum

    def start(self, trees):
        return tuple(trees)

    def leaf(self, items):
        from .forest import Leaf

        return Leaf(self._parse_datum(str(items[0])))

    def node(self, items):
        from .forest import mk_node

        tag, *trees = items
        return mk_node(int(tag), tuple(trees))


def parse_data(text: str, parse_datum: Optional[Callable[[str], object]] = None):
    """Parse a data literal into a forest in normal form.

    Args:
        text: Literal such as ``"<1, 5>"`` or ``"2 3"``.
        parse_datum: Converts the text of a basic datum; defaults to the
            natural-number library.
    """
    if parse_datum is None:
        from .stdlib import get_library

        parse_datum = get_library("nat").parse_datum
    return _parse(_data_parser(), text, _ToForest(parse_datum))


# -- printing --------------------------------------------------------------

_OBJ_SUM, _OBJ_PROD, _OBJ_ATOM = range(3)


def format_obj(x: ObjExpr, level: int = _OBJ_SUM) -> str:
    if isinstance(x, ObjName):
        return x.name
    if isinstance(x, ObjI):
        return "I"
    if isinstance(x, ObjO):
        return "O"
    if isinstance(x, ObjSum):
        text, own = f"{format_obj(x.left, _OBJ_SUM)} + {format_obj(x.right, _OBJ_PROD)}", _OBJ_SUM
    else:
        text, own = f"{format_obj(x.left, _OBJ_PROD)} * {format_obj(x.right, _OBJ_ATOM)}", _OBJ_PROD
    return f"({text})" if level > own else text


_ARR_CASE, _ARR_SEQ, _ARR_SUM, _ARR_PROD, _ARR_ATOM = range(5)

_KEYWORDS = {
    ArrId: "id", ArrInj1: "inj_1", ArrInj2: "inj_2", ArrProj1: "proj_1", ArrProj2: "proj_2",
    ArrBang: "!", ArrTerm: "term", ArrDist: "dist",
}


def _objs(objs) -> str:
    if not isinstance(objs, tuple):
        objs = (objs,)
    return ", ".join(format_obj(x) for x in objs)


def format_arrow(f: ArrowExpr, level: int = _ARR_CASE) -> str:
    """Render an arrow in source syntax with minimal parentheses."""
    if isinstance(f, ArrName):
        return f.name
    if isinstance(f, STRUCTURAL):
        keyword = _KEYWORDS[type(f)]
        annotation = f.obj if isinstance(f, (ArrId, ArrBang, ArrTerm)) else f.objs
        return keyword if annotation is None else f"{keyword}({_objs(annotation)})"
    if isinstance(f, ArrCall):
        body = format_arrow(f.body)
        return f"call[{body}]" if f.objs is None else f"call[{_objs(f.objs)}, {body}]"
    if isinstance(f, ArrCase):
        text, own = f"{format_arrow(f.left, _ARR_SEQ)} | {format_arrow(f.right, _ARR_SEQ)}", _ARR_CASE
    elif isinstance(f, ArrPair):
        text, own = f"{format_arrow(f.left, _ARR_SEQ)}, {format_arrow(f.right, _ARR_SEQ)}", _ARR_CASE
    elif isinstance(f, ArrSeq):
        text, own = f"{format_arrow(f.first, _ARR_SUM)} ; {format_arrow(f.then, _ARR_SEQ)}", _ARR_SEQ
    elif isinstance(f, ArrSum):
        text, own = f"{format_arrow(f.left, _ARR_PROD)} + {format_arrow(f.right, _ARR_SUM)}", _ARR_SUM
    elif isinstance(f, ArrProd):
        text, own = f"{format_arrow(f.left, _ARR_ATOM)} * {format_arrow(f.right, _ARR_PROD)}", _ARR_PROD
    else:
        raise TypeError(f"not an arrow expression: {f!r}")
    return f"({text})" if level > own else text


def format_def(d: Def) -> str:
    darts = " ".join(f"--{format_arrow(s.arrow)}--> {format_obj(s.cod)}" for s in d.steps)
    return f"{d.name} : {format_obj(d.dom)} {darts}"


def print_program(p: Program) -> str:
    """Render a program so that :func:`parse_program` reads it back."""
    lines = ["obj " + ", ".join(p.objects) + ";" if p.objects else "obj ;"]
    if p.refs:
        refs = ",\n    ".join(f"{r.name} : {format_obj(r.dom)} -> {format_obj(r.cod)}" for r in p.refs)
        lines.append(f"lib\n    {refs};")
    else:
        lines.append("lib ;")
    if p.defs:
        defs = ";\n    ".join(format_def(d) for d in p.defs)
        lines.append(f"def\n    {defs}\n.")
    else:
        lines.append("def .")
    return "\n".join(lines) + "\n"


def format_data(d) -> str:
    """Render a forest in the data literal grammar."""
    from .forest import format_forest

    return format_forest(d)
