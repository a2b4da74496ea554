import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degdyn.henon import (HenonMap, classify_point, fixed_points_henon, green_minus, green_plus,
                          green_plus_array, indeterminacy_points, parse_henon, regularity_check)
from degdyn.mapalg import parse_map
from degdyn.onedim import Poly1C

SQ_HENON = HenonMap.single(Poly1C([0, 0, 1]), 1.0)

finite = dict(allow_nan=False, allow_infinity=False)


def test_map_and_inverse():
    h = HenonMap.single(Poly1C([1, 0, 1]), 0.5)
    assert h(2.0, 3.0) == (2 ** 2 + 1 - 0.5 * 3, 2.0)
    z, w = h.inverse(*h(2.0, 3.0))
    assert (z, w) == pytest.approx((2.0, 3.0))


def test_chain_degree_and_jacobian():
    h = parse_henon("z^2-2 @ 0.3; z^3 @ 1")
    assert h.degree == 6 and h.jacobian_constant == pytest.approx(0.3)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=3, **finite), st.complex_numbers(max_magnitude=3, **finite))
def test_jacobian_determinant_is_constant(z, w):
    h = parse_henon("z^2-1 @ 0.4; z^3+z @ -2")
    assert np.linalg.det(h.jacobian(z, w)) == pytest.approx(h.jacobian_constant, abs=1e-9 * (1 + abs(z) + abs(w)) ** 6)


# ----------------------------------------------------------------- green


def test_green_at_large_point():
    assert green_plus(SQ_HENON, (1e6, 0)).value == pytest.approx(math.log(1e6), abs=1e-3)


def test_green_vanishes_at_fixed_point():
    p = fixed_points_henon(SQ_HENON).points[0].point
    assert green_plus(SQ_HENON, p).value == 0 and green_minus(SQ_HENON, p).value == 0


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=4, **finite), st.complex_numbers(max_magnitude=4, **finite),
       st.complex_numbers(max_magnitude=1.5, **finite))
def test_green_plus_scales_under_the_map(z, w, c):
    h = HenonMap.single(Poly1C([c, 0, 1]), 0.7)
    g, _, _, _ = green_plus_array(h, np.array([z]), np.array([w]))
    g1, _, _, _ = green_plus_array(h, *h(np.array([z]), np.array([w])))
    assert g1[0] == pytest.approx(2 * g[0], abs=1e-8)


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(max_magnitude=50, **finite), st.complex_numbers(max_magnitude=50, **finite))
def test_green_plus_minus_log_norm_is_bounded(z, w):
    g = green_plus(SQ_HENON, (z, w)).value
    assert g - math.log(max(1.0, abs(z), abs(w))) <= math.log(3)


def test_green_plus_minus_log_norm_on_probe_rings():
    h = parse_henon("z^2-1 @ 0.5")
    theta = 2 * np.pi * np.arange(64) / 64
    worst = []
    for r in (10, 1e3, 1e6):
        z = r * np.cos(theta) * np.exp(1j * theta)
        w = r * np.sin(theta) * np.exp(-1j * theta)
        g, _, _, _ = green_plus_array(h, z, w)
        gap = g - np.log(np.maximum(1.0, np.maximum(np.abs(z), np.abs(w))))
        worst.append(float(gap.max()))
        # along w = 0 the orbit escapes at once and the gap vanishes as r grows
        assert abs(gap[0]) <= 2 / r
    # K+ is unbounded, so only the upper bound is uniform
    assert max(worst) <= math.log(3)


def test_point_classification():
    p = fixed_points_henon(SQ_HENON).points[0].point
    assert classify_point(SQ_HENON, p).in_K
    far = classify_point(SQ_HENON, (1e6, 0))
    assert not far.in_K_plus and not far.in_K


# -------------------------------------------------------- periodic points


@pytest.mark.parametrize("c,a", [(0.0, 0.3), (-1.2, 0.5), (0.4 + 0.3j, 1.0), (2.0, -0.8)])
def test_fixed_points_match_quadratic_formula(c, a):
    h = HenonMap.single(Poly1C([c, 0, 1]), a)
    res = fixed_points_henon(h)
    disc = cmath.sqrt((1 + a) ** 2 - 4 * c)
    expected = sorted([((1 + a) + disc) / 2, ((1 + a) - disc) / 2], key=lambda x: (x.real, x.imag))
    got = sorted([p.point[0] for p in res.points], key=lambda x: (x.real, x.imag))
    assert got == pytest.approx(expected, abs=1e-12)
    for p in res.points:
        assert p.point[0] == pytest.approx(p.point[1], abs=1e-12)
        assert p.determinant == pytest.approx(a, abs=1e-12)


def test_period_two_count():
    res = fixed_points_henon(SQ_HENON, period=2)
    assert len(res.points) == res.expected == 4
    for p in res.points:
        z, w = SQ_HENON.iterate(*p.point, 2)
        assert abs(z - p.point[0]) + abs(w - p.point[1]) <= 1e-9


def test_saddle_type():
    res = fixed_points_henon(SQ_HENON)
    types = {round(p.point[0].real): p.type for p in res.points}
    assert types[2] == "saddle"


# --------------------------------------------------------------- regularity


def test_indeterminacy_of_henon():
    I = indeterminacy_points(parse_map("(z^2-w, z)", "proj"))
    assert I.dim == 0 and len(I.points) == 1 and I.contains([0, 1, 0])


def test_indeterminacy_of_degree_dropping_map():
    I = indeterminacy_points(parse_map("(z*w+1, z+2)", "proj"))
    assert len(I.points) == 2 and I.contains([0, 1, 0]) and I.contains([1, 0, 0])


def test_henon_chain_is_regular_with_l_one():
    rep = regularity_check(parse_henon("z^2-2 @ 0.3; z^3 @ 1"))
    assert rep.regular and rep.l == 1
    assert rep.degrees == [6 ** n for n in range(1, 7)]


def test_product_of_henon_maps_is_regular_with_l_two():
    names = ["z", "w", "u", "v"]
    f = parse_map("(z^2-w, z, u^2-v, u)", variables=names)
    g = parse_map("(w, w^2-z, v, v^2-u)", variables=names)
    rep = regularity_check(f, g)
    assert rep.regular and rep.l == 2 and rep.lambda_l_predicted == 4


def test_weakly_regular_example_is_not_regular():
    names = ["x", "y", "z"]
    f = parse_map("(x*y+z, x^2+y, x)", variables=names)
    g = parse_map("(z, y-z^2, x-z*(y-z^2))", variables=names)
    rep = regularity_check(f, g)
    assert not rep.regular and rep.l is None
    assert rep.intersection["meets"]
    assert any("weak regularity" in n for n in rep.notes)


def test_wrong_inverse_is_rejected():
    names = ["z", "w"]
    with pytest.raises(ValueError, match="inverse"):
        regularity_check(parse_map("(z^2-w, z)"), parse_map("(w, z)", variables=names))
