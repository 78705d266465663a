import pytest

from hypdel import delaunay as D
from hypdel import surface as S


def linear_atlas(g, lengths=None, twists=None):
    pg = S.linear_graph(g)
    n = len(pg.edges)
    if lengths is None:
        lengths = (1.0,) * n
    if twists is None:
        twists = (0.0,) * n
    return S.build_atlas(pg, S.FNCoordinates(tuple(lengths), tuple(twists)))


def thin_lengths(g):
    """All cuffs 1.0 except the first, which is 0.5 (one thin-thin cuff)."""
    n = 3 * g - 3
    return (0.5,) + (1.0,) * (n - 1)


_CACHE = {}


def cached_build(g, thin=False):
    """Atlas + thick-thin triangulation for the symmetric linear surface,
    shared across test modules (construction is the expensive part)."""
    key = (g, thin)
    if key not in _CACHE:
        atlas = linear_atlas(g, thin_lengths(g) if thin else None)
        res = D.thick_thin_triangulation(atlas)
        text = D.complex_to_json(res.complex)
        _CACHE[key] = (atlas, res, text)
    return _CACHE[key]


@pytest.fixture(scope="session")
def g2_build():
    return cached_build(2)


@pytest.fixture(scope="session")
def g2_thin_build():
    return cached_build(2, thin=True)
