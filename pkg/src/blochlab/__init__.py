"""Refined pre-Bloch groups of small finite commutative rings, computed exactly."""

__version__ = "0.1.0"

from .errors import (BlochLabError, DomainError, GenerationIncomplete, IllDefined, NotAClique,
                     NotAHom, NotPrimePower, NotStable, ParseError, TooLarge)
from .rings import FiniteRing, parse_ring

__all__ = [
    "__version__", "parse_ring", "FiniteRing", "BlochLabError", "ParseError", "NotPrimePower",
    "TooLarge", "IllDefined", "NotAHom", "NotAClique", "NotStable", "GenerationIncomplete",
    "DomainError",
]
