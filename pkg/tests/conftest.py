import functools

import pytest

from blochlab.rings import parse_ring

CORPUS = ("GF(2)", "GF(3)", "GF(4)", "GF(5)", "GF(7)", "GF(9)",
          "Z/4", "Z/8", "Z/9", "GF(2)[t]/(t^2)", "Z/6")
SMALL = ("GF(2)", "GF(3)", "GF(4)", "GF(5)", "Z/4", "Z/6", "GF(2)[t]/(t^2)")


@functools.lru_cache(maxsize=None)
def ring(spec):
    """One shared ring object per spec, so per-ring caches are reused across tests."""
    return parse_ring(spec)


@pytest.fixture
def get_ring():
    return ring
