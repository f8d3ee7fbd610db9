"""Tagged forests: the runtime representation of data.

A forest is a tuple of trees. A tree is either a :class:`Leaf` carrying a
library datum or a :class:`Node` carrying a natural tag and a child forest.
The empty forest is the only element of ``I``. Forests are kept in normal
form: a node whose children are exactly one node is merged into it, adding
the tags (see :func:`mk_node`).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional, Tuple, Union

from .objects import FlatBasic, FlatObj, ProdList, SumList


@dataclass(frozen=True)
class Leaf:
    datum: Any


@dataclass(frozen=True)
class Node:
    tag: int
    children: Tuple["Tree", ...] = ()


Tree = Union[Leaf, Node]
Forest = Tuple[Tree, ...]

DatumCheck = Callable[[str, Any], bool]


def mk_node(tag: int, children: Forest) -> Node:
    """Build ``<tag, children>`` in normal form.

    Raises:
        ValueError: If ``tag`` is negative.
    """
    if tag < 0:
        raise ValueError(f"negative tag {tag}")
    children = tuple(children)
    if len(children) == 1 and isinstance(children[0], Node):
        inner = children[0]
        return Node(tag + inner.tag, inner.children)
    return Node(tag, children)


def concat(a: Forest, b: Forest) -> Forest:
    return tuple(a) + tuple(b)


def is_normal(d: Forest) -> bool:
    """True when no node in ``d`` has a single node as its only child."""
    for tree in d:
        if isinstance(tree, Node):
            if len(tree.children) == 1 and isinstance(tree.children[0], Node):
                return False
            if not is_normal(tree.children):
                return False
    return True


def width(t: FlatObj) -> int:
    """Number of trees representing one element of ``t``.

    Every factor of a product is one tree; a non-product is one tree.
    """
    return len(t.items) if isinstance(t, ProdList) else 1


def check_data(d: Forest, t: FlatObj, datum_check: Optional[DatumCheck] = None) -> bool:
    """Structural type check of a forest against a flat object.

    A leaf matches any basic object unless ``datum_check`` is supplied, in
    which case it is asked whether the datum belongs to the named object.
    """
    d = tuple(d)
    if isinstance(t, ProdList):
        if len(d) != len(t.items):
            return False
        return all(check_data((tree,), item, datum_check) for tree, item in zip(d, t.items))
    if len(d) != 1:
        return False
    tree = d[0]
    if isinstance(t, SumList):
        if not isinstance(tree, Node) or tree.tag >= len(t.items):
            return False
        return check_data(tree.children, t.items[tree.tag], datum_check)
    if isinstance(t, FlatBasic) and isinstance(tree, Leaf):
        return datum_check is None or datum_check(t.name, tree.datum)
    return False


def forest_size(d: Forest) -> int:
    """Count of leaf and node constructors in ``d``."""
    return sum(1 if isinstance(tree, Leaf) else 1 + forest_size(tree.children) for tree in d)


def format_forest(d: Forest) -> str:
    """Render ``d`` in the data literal syntax, e.g. ``<1, 5>``."""
    return " ".join(_format_tree(tree) for tree in d)


def _format_tree(tree: Tree) -> str:
    if isinstance(tree, Leaf):
        return str(tree.datum)
    if not tree.children:
        return f"<{tree.tag},>"
    return f"<{tree.tag}, {format_forest(tree.children)}>"
