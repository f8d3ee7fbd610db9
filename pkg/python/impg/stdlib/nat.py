"""Natural numbers with arbitrary precision.

``s : I + N -> N`` and ``p : N -> I + N`` are mutually inverse: ``s`` sends
the unit summand to zero and the ``N`` summand to its successor. Comparisons
answer in ``I + I`` with the first summand meaning false.
"""

from __future__ import annotations

import operator
from typing import Any, Callable, Dict, Tuple

from ..errors import DispatchError
from ..forest import Forest, Leaf, Node
from ..objects import FlatBasic, FlatObj, ProdList, SumList, UNIT, to_obj
from ..signature import ArrowKind, Entry, Signature
from ..syntax import ObjExpr

N = FlatBasic("N")
_UNIT_OR_N = SumList((UNIT, N))
_PAIR = ProdList((N, N))
_BOOL = SumList((UNIT, UNIT))

SIGNATURE: Dict[str, Tuple[FlatObj, FlatObj]] = {
    "s": (_UNIT_OR_N, N),
    "p": (N, _UNIT_OR_N),
    "plus": (_PAIR, N),
    "minus": (_PAIR, N),
    "times": (_PAIR, N),
    "gt": (_PAIR, _BOOL),
    "ge": (_PAIR, _BOOL),
    "eq": (_PAIR, _BOOL),
}

_ARITHMETIC: Dict[str, Callable[[int, int], int]] = {
    "plus": operator.add,
    "minus": lambda a, b: max(a - b, 0),
    "times": operator.mul,
}

_COMPARISON: Dict[str, Callable[[int, int], bool]] = {
    "gt": operator.gt,
    "ge": operator.ge,
    "eq": operator.eq,
}

FALSE: Forest = (Node(0, ()),)
TRUE: Forest = (Node(1, ()),)


def is_nat(datum: Any) -> bool:
    return isinstance(datum, int) and not isinstance(datum, bool) and datum >= 0


def parse_datum(text: str) -> int:
    text = text.strip()
    if not text.isdigit():
        raise ValueError(f"not a natural number: {text!r}")
    return int(text)


def datum_check(obj: str, datum: Any) -> bool:
    return obj == "N" and is_nat(datum)


def nat_signature() -> Signature:
    """The Nat arrows as library entries, in declaration order."""
    return Signature(Entry(name, dom, cod, ArrowKind.LIBRARY) for name, (dom, cod) in SIGNATURE.items())


def nat_types() -> Dict[str, Tuple[ObjExpr, ObjExpr]]:
    """The signature as binary object expressions, e.g. ``s : I + N -> N``."""
    return {name: (to_obj(dom), to_obj(cod)) for name, (dom, cod) in SIGNATURE.items()}


def _number(tree) -> int:
    if isinstance(tree, Leaf) and is_nat(tree.datum):
        return tree.datum
    raise DispatchError(f"expected a natural number, got {tree!r}")


def apply_nat(name: str, d: Forest) -> Forest:
    """Run the basic arrow ``name`` on the forest ``d``.

    Raises:
        DispatchError: For unknown arrows or forests of the wrong shape.
    """
    d = tuple(d)
    if name == "s":
        if len(d) == 1 and isinstance(d[0], Node):
            node = d[0]
            if node.tag == 0 and not node.children:
                return (Leaf(0),)
            if node.tag == 1 and len(node.children) == 1:
                return (Leaf(_number(node.children[0]) + 1),)
        raise DispatchError(f"s expects <0,> or <1, n>, got {d!r}")
    if name == "p":
        if len(d) != 1:
            raise DispatchError(f"p expects one number, got {d!r}")
        n = _number(d[0])
        return FALSE if n == 0 else (Node(1, (Leaf(n - 1),)),)
    if name in _ARITHMETIC or name in _COMPARISON:
        if len(d) != 2:
            raise DispatchError(f"{name} expects two numbers, got {d!r}")
        a, b = _number(d[0]), _number(d[1])
        if name in _ARITHMETIC:
            return (Leaf(_ARITHMETIC[name](a, b)),)
        return TRUE if _COMPARISON[name](a, b) else FALSE
    raise DispatchError(f"unknown natural-number arrow {name}")


def _make_library():
    from . import Library

    return Library("nat", parse_datum, datum_check, SIGNATURE, apply_nat)


LIBRARY = _make_library()
