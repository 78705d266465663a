import math

import pytest

from hypdel import equilateral as E
from hypdel import geometry as G
from hypdel.errors import InvalidRotation, NotHyperbolizable


def k7_rotation():
    rows = {}
    for i in range(7):
        rows[i] = [(i + d) % 7 for d in (1, 3, 2, 6, 4, 5)]
    text = "\n".join(f"{v}: " + " ".join(map(str, rows[v]))
                     for v in range(7))
    return E.parse_rotation(text)


def k4_rotation():
    text = "0: 1 2 3\n1: 2 0 3\n2: 0 1 3\n3: 0 2 1\n"
    return E.parse_rotation(text)


def test_parse_round_trip():
    rot = k7_rotation()
    assert rot.n == 7
    assert sorted(rot.rotations[0]) == [1, 2, 3, 4, 5, 6]


def test_parse_errors():
    with pytest.raises(InvalidRotation, match="expected"):
        E.parse_rotation("0 - 1 2\n")
    with pytest.raises(InvalidRotation, match="duplicate"):
        E.parse_rotation("0: 1 2\n0: 2 1\n1: 0 2\n2: 0 1\n")
    with pytest.raises(InvalidRotation, match="cover"):
        E.parse_rotation("0: 1 2\n1: 0 2\n5: 0 1\n")
    with pytest.raises(InvalidRotation):
        # row must be a permutation of the other vertices
        E.parse_rotation("0: 1 1\n1: 0 2\n2: 0 1\n")


def test_k4_is_spherical():
    verdict = E.check_hyperbolizable(k4_rotation())
    assert verdict.genus == 0
    assert not verdict.ok
    assert any("mod 12" in r for r in verdict.reasons)


def test_k7_is_flat_torus():
    rot = k7_rotation()
    faces, g = E.trace_faces(rot)
    assert len(faces) == 14
    assert g == 1
    verdict = E.check_hyperbolizable(rot)
    assert not verdict.ok
    assert any("not hyperbolic" in r for r in verdict.reasons)
    with pytest.raises(NotHyperbolizable, match="not hyperbolic"):
        E.hyperbolize(rot)


def test_k12_rotation_checks_out():
    rot = E.load_k12_rotation()
    faces, g = E.trace_faces(rot)
    assert len(faces) == 44
    assert g == 6
    verdict = E.check_hyperbolizable(rot)
    assert verdict.ok
    assert verdict.side == pytest.approx(2.351708458989967, abs=1e-12)


def test_k12_corrupted_row_rejected():
    rot = E.load_k12_rotation()
    rows = [list(r) for r in rot.rotations]
    rows[0][0], rows[0][1] = rows[0][1], rows[0][0]
    text = "\n".join(f"{v}: " + " ".join(map(str, r))
                     for v, r in enumerate(rows))
    try:
        verdict = E.check_hyperbolizable(E.parse_rotation(text))
        assert not verdict.ok
    except InvalidRotation:
        pass  # odd Euler characteristic / open face walk also rejects


def test_equilateral_side_angle_consistency():
    # independent oracle: the hyperbolic law of cosines for an
    # equilateral triangle of side s gives
    # cos(alpha) = (cosh(s)^2 - cosh(s)) / sinh(s)^2
    side = 2.351708458989967
    assert G.equilateral_side(2.0 * math.pi / 11.0) == \
        pytest.approx(side, abs=1e-12)
    corners = E._equilateral_corners(side)
    assert G.dist(corners[0], corners[1]) == pytest.approx(side, abs=1e-9)
    c = math.cosh(side)
    cos_alpha = (c * c - c) / (math.sinh(side) ** 2)
    assert cos_alpha == pytest.approx(math.cos(2.0 * math.pi / 11.0),
                                      abs=1e-12)


def test_k12_hyperbolize_and_certify():
    surf = E.hyperbolize(E.load_k12_rotation())
    assert surf.n == 12
    assert surf.genus == 6
    assert surf.angle == pytest.approx(2.0 * math.pi / 11.0, abs=1e-12)
    assert len(surf.faces) == 44
    cert, text = E.certify_equilateral(surf)
    assert cert.passed, cert.summary()
    # the two-ring margin is strictly positive
    ring = [c for c in cert.checks if c.name == "equilateral_two_ring"][0]
    assert ring.passed
