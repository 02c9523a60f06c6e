"""Size caps shared by the pipelines, overridable through ``BLOCHLAB_CAPS``.

The variable holds comma separated ``key=value`` pairs, for example
``BLOCHLAB_CAPS="ring=81,cliques=500000"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace

from .errors import TooLarge


@dataclass(frozen=True)
class Caps:
    ring: int = 64             # full pipelines (coinvariants, battery)
    parse: int = 1024          # anything the DSL may construct at all
    cliques: int = 50_000      # largest X_n that may be enumerated
    axiom_check: int = 64      # exhaustive ring-axiom check up to this size

    def check(self, what: str, size: int, key: str) -> None:
        limit = getattr(self, key)
        if size > limit:
            raise TooLarge(f"{what} has size {size}, above the '{key}' cap of {limit}")


def parse_caps(text: str, base: Caps | None = None) -> Caps:
    base = base or Caps()
    names = {f.name for f in fields(Caps)}
    updates = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        key, _, value = part.partition("=")
        key = key.strip()
        if key not in names:
            raise ValueError(f"unknown cap {key!r}")
        updates[key] = int(value)
        if updates[key] <= 0:
            raise ValueError(f"cap {key!r} must be positive")
    return replace(base, **updates)


def default_caps() -> Caps:
    env = os.environ.get("BLOCHLAB_CAPS", "")
    return parse_caps(env) if env else Caps()
