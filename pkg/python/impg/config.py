"""Runtime settings, read from the environment and overridden by CLI flags."""

from __future__ import annotations

import dataclasses
import logging
import os
from typing import Mapping, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 1_000_000

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off", ""}


def _flag(env: Mapping[str, str], key: str, default: bool) -> bool:
    raw = env.get(key)
    if raw is None:
        return default
    value = raw.strip().lower()
    if value in _TRUE:
        return True
    if value in _FALSE:
        return False
    raise ConfigError(f"{key} must be a boolean, got {raw!r}")


@dataclasses.dataclass(frozen=True)
class Settings:
    """Knobs shared by the compiler, the VM and the checker.

    Attributes:
        budget: Maximum number of loop-body applications per execution.
        optimize: Run the peephole optimizer after compilation.
        exhaustive: Enumerate every instantiation and report ambiguity.
        strict_data: Validate basic data against the owning library.
        trace: Log every VM rule firing at DEBUG level.
    """

    budget: int = DEFAULT_BUDGET
    optimize: bool = True
    exhaustive: bool = False
    strict_data: bool = False
    trace: bool = False

    def __post_init__(self) -> None:
        if self.budget < 0:
            raise ConfigError(f"budget must be nonnegative, got {self.budget}")

    @classmethod
    def from_env(cls, env: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build settings from ``IMPG_*`` environment variables."""
        env = os.environ if env is None else env
        budget = DEFAULT_BUDGET
        raw = env.get("IMPG_BUDGET")
        if raw is not None:
            try:
                budget = int(raw)
            except ValueError:
                raise ConfigError(f"IMPG_BUDGET must be an integer, got {raw!r}") from None
        settings = cls(
            budget=budget,
            exhaustive=_flag(env, "IMPG_EXHAUSTIVE", False),
            strict_data=_flag(env, "IMPG_STRICT_DATA", False),
            trace=_flag(env, "IMPG_TRACE", False),
        )
        logger.debug("settings from environment: %s", settings)
        return settings

    def replace(self, **changes: object) -> "Settings":
        """Return a copy with ``None``-valued overrides ignored."""
        return dataclasses.replace(self, **{k: v for k, v in changes.items() if v is not None})
