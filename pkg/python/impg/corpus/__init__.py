"""Example programs shipped with the package.

``fact``, ``add``, ``primrec``, ``minim`` and ``nested_call`` compile;
``twist_ambiguous`` is ambiguous under exhaustive checking and
``bad_compose`` is rejected by the checker.
"""

from __future__ import annotations

from importlib import resources
from typing import Dict, List

from ..syntax import Program, parse_program

NEGATIVE = ("bad_compose",)
AMBIGUOUS = ("twist_ambiguous",)


def names() -> List[str]:
    """Names of the shipped programs, sorted."""
    return sorted(
        entry.name[: -len(".imp")] for entry in resources.files(__name__).iterdir() if entry.name.endswith(".imp")
    )


def source(name: str) -> str:
    """Text of the shipped program ``name``.

    Raises:
        KeyError: If no such program ships with the package.
    """
    path = resources.files(__name__).joinpath(f"{name}.imp")
    if not path.is_file():
        raise KeyError(f"no example program named {name!r}; available: {', '.join(names())}")
    return path.read_text(encoding="ascii")


def load(name: str) -> Program:
    return parse_program(source(name))


def example_corpus() -> Dict[str, str]:
    """Every shipped program's text, keyed by name."""
    return {name: source(name) for name in names()}
