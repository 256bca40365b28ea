import pytest

from flatlands import Geometry, field_make

_CACHE = {}


def build(kind, r, q):
    """Session-cached geometries so memoized hyperplane lists are shared."""
    key = (kind, r, q)
    if key not in _CACHE:
        _CACHE[key] = Geometry(kind, r, field_make(q))
    return _CACHE[key]


@pytest.fixture(scope="session")
def geom():
    return build
