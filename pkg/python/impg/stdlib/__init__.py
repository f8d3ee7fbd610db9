"""Registry of basic-arrow libraries.

A library owns a kind of basic datum (how to parse it, how to recognise it)
together with the signatures and implementations of its basic arrows.
Programs bind their ``lib`` references by name against the registered
libraries. Natural numbers are registered on import.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, Mapping, Optional, Tuple

from ..errors import DispatchError, ImpError
from ..forest import Forest
from ..objects import FlatObj

logger = logging.getLogger(__name__)

Apply = Callable[[str, Forest], Forest]


@dataclass(frozen=True)
class Library:
    """A basic-arrow library.

    Attributes:
        name: Registry key.
        parse_datum: Turns the text of a basic datum literal into a datum.
        datum_check: ``datum_check(object_name, datum)`` for strict data checks.
        signature: Arrow name to ``(dom, cod, ...)`` flat types.
        apply: ``apply(arrow_name, forest)`` runs one basic arrow.
    """

    name: str
    parse_datum: Callable[[str], Any]
    datum_check: Callable[[str, Any], bool]
    signature: Mapping[str, Tuple[FlatObj, FlatObj]]
    apply: Apply

    def provides(self, arrow: str) -> bool:
        return arrow in self.signature


_REGISTRY: Dict[str, Library] = {}


def register(library: Library, *, replace: bool = False) -> None:
    """Add a library; re-registering a name needs ``replace=True``."""
    if library.name in _REGISTRY and not replace:
        raise ImpError(f"library {library.name} already registered")
    _REGISTRY[library.name] = library
    logger.debug("registered library %s with %d arrows", library.name, len(library.signature))


def unregister(name: str) -> None:
    _REGISTRY.pop(name, None)


def get_library(name: str) -> Library:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ImpError(f"no library named {name}") from None


def libraries() -> Iterator[Library]:
    return iter(tuple(_REGISTRY.values()))


def find_provider(arrow: str) -> Optional[Library]:
    """First registered library implementing ``arrow``."""
    return next((lib for lib in _REGISTRY.values() if lib.provides(arrow)), None)


def dispatch(arrow: str, d: Forest) -> Forest:
    library = find_provider(arrow)
    if library is None:
        raise DispatchError(f"no library implements arrow {arrow}")
    return library.apply(arrow, d)


from . import nat  # noqa: E402

register(nat.LIBRARY)
