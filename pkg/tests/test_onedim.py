import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degdyn.numerics import EmpiricalMeasure, measure_distance, stream, unit_circle_measure
from degdyn.onedim import (Conjugacy, ExceptionalStartError, GreenParams, Poly1C, ball_mass_check,
                           capacity_check, chi_quadratic, chi_top_estimate, conjugate,
                           dimension_estimate, exceptional_points, green, green_array,
                           holder_estimate, lyapunov, lyapunov_critical, mixing_experiment,
                           normalize_monic_centered, observable, parameter_sweep, parse_map1d,
                           periodic_points, preimage_equidistribution, preimage_tree,
                           quadratic_family_green, sample_measure)

LOG2 = math.log(2)
SQ = Poly1C([0, 0, 1])
CHEB = Poly1C([-2, 0, 1])
G0_PLUS10 = 1.175223358830179  # G at 0 for z^2 + 10, from escape_rate_oracle


def escape_rate_oracle(c, z, n=40):
    """Plain escape rate ``2^-k log|f^k(z)|`` for ``z^2 + c``, stopped once the orbit is huge."""
    for k in range(n):
        z = z * z + c
        if abs(z) > 1e100:
            # beyond this, log|f^{k+1}| = 2 log|f^k| to double precision
            return math.log(abs(z)) / 2 ** (k + 1)
    return max(math.log(max(abs(z), 1e-300)), 0) / 2 ** n


# -------------------------------------------------------------------- parsing


def test_parse_polynomial_and_rational():
    f = parse_map1d("z^2 - 2")
    assert isinstance(f, Poly1C) and f.degree == 2
    r = parse_map1d("1/z^2")
    assert r.degree == 2 and not isinstance(r, Poly1C)


# --------------------------------------------------------------------- green


def test_green_of_power_map_is_exact():
    assert green(SQ, 2).value == LOG2
    assert green(SQ, 2).error == 0


def test_green_of_chebyshev_at_three():
    assert green(CHEB, 3).value == pytest.approx(math.log((3 + math.sqrt(5)) / 2), abs=1e-12)


def test_green_vanishes_on_filled_julia_set():
    assert green(CHEB, 1).value == 0 and not green(CHEB, 1).escaped


def test_green_at_critical_point_of_z2_plus_10():
    assert green(Poly1C([10, 0, 1]), 0).value == pytest.approx(escape_rate_oracle(10, 0), abs=1e-12)
    assert green(Poly1C([10, 0, 1]), 0).value == pytest.approx(G0_PLUS10, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_functional_equation(c, z):
    f = Poly1C([c, 0, 1])
    g, gf = green_array(f, np.array([z, z * z + c]), GreenParams(max_iter=200))[0]
    assert gf == pytest.approx(2 * g, abs=1e-9)
    assert g >= 0


@settings(max_examples=40, deadline=None)
@given(st.complex_numbers(min_magnitude=0.1, max_magnitude=6, allow_nan=False, allow_infinity=False))
def test_green_of_power_map_is_log_plus(z):
    assert green(SQ, z).value == pytest.approx(max(math.log(abs(z)), 0), abs=1e-12)


def test_capacity_of_chebyshev():
    cap = capacity_check(CHEB, radii=(1e4,))
    assert cap.offset == 0 and cap.max_deviation <= 1e-6


def test_capacity_offset_of_scaled_square():
    assert capacity_check(Poly1C([0, 0, 2])).offset == pytest.approx(LOG2, abs=1e-12)


# -------------------------------------------------------------- normal form


def test_normalize_scaled_quadratic():
    g, A = normalize_monic_centered(Poly1C([1, 0, 2]))
    assert np.allclose(g.coeffs, [2, 0, 1]) and A == Conjugacy(2, 0)


def test_normalize_leaves_chebyshev_alone():
    g, A = normalize_monic_centered(CHEB)
    assert np.allclose(g.coeffs, CHEB.coeffs) and A.is_identity()


def test_normalize_centers_cubic():
    g, A = normalize_monic_centered(Poly1C([0, 0, 3, 1]))
    assert np.allclose(g.coeffs, [3, -3, 0, 1]) and A == Conjugacy(1, 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=3, max_size=5),
       st.complex_numbers(min_magnitude=0.5, max_magnitude=3, allow_nan=False, allow_infinity=False))
def test_normal_form_conjugates_and_is_monic_centered(coeffs, lead):
    f = Poly1C(coeffs + [lead])
    g, A = normalize_monic_centered(f)
    assert g.coeffs[-1] == pytest.approx(1) and abs(g.coeffs[-2]) <= 1e-9 * (1 + np.abs(g.coeffs).max())
    z = np.array([0.3 + 0.1j, -0.7j, 1.1])
    lhs, rhs = g(A(z)), A(f(z))
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-9 * (1 + np.abs(rhs).max()))
    back = conjugate(g, Conjugacy(1 / A.a, -A.b / A.a))
    assert np.allclose(back.coeffs, f.coeffs, atol=1e-8 * (1 + np.abs(f.coeffs).max()))


# ----------------------------------------------------------- exceptional set


@pytest.mark.parametrize("text,tag,size", [("z^2", "power-map", 2), ("z^3", "power-map", 2),
                                           ("z^2+1", "polynomial", 1), ("z^2-2", "polynomial", 1)])
def test_exceptional_points(text, tag, size):
    E = exceptional_points(parse_map1d(text))
    assert E.tag == tag and len(E.points) == size and E.contains(math.inf)


# ------------------------------------------------------------------ sampling


def test_start_at_exceptional_point_is_rejected():
    with pytest.raises(ExceptionalStartError):
        sample_measure(SQ, 10, 100, start=0)


def test_preimage_tree_has_full_size_and_maps_back():
    pts = preimage_tree(CHEB, 0.3, 5)
    assert len(pts) == 32
    assert np.allclose(CHEB.iterate(pts, 5), 0.3, atol=1e-9)


def test_sampler_is_reproducible_and_thread_independent():
    a = sample_measure(CHEB, 30, 2000, start=0.3, seed=4).points
    b = sample_measure(CHEB, 30, 2000, start=0.3, seed=4).points
    c = sample_measure(CHEB, 30, 2000, start=0.3, seed=4, threads=3).points
    assert np.array_equal(a, b) and np.array_equal(a, c)


def test_circle_samples_match_arc_length():
    mu = sample_measure(SQ, 30, 20_000, start=2.0, seed=5)
    assert measure_distance(mu, unit_circle_measure()) <= 0.05


def test_roots_of_unity_equidistribute_quickly():
    res = preimage_equidistribution(SQ, 1, [1, 6])
    assert res.distances[-1] <= 0.002


def test_equidistribution_rejects_exceptional_start():
    with pytest.raises(ExceptionalStartError):
        preimage_equidistribution(SQ, 0, [1, 2])


def test_two_independent_samples_are_close():
    a = sample_measure(CHEB, 40, 100_000, start=0.3, seed=21)
    b = sample_measure(CHEB, 40, 100_000, start=0.3, seed=22)
    assert measure_distance(a, b) <= 0.02


# ------------------------------------------------------------------ lyapunov


def test_critical_exponent_values():
    assert lyapunov_critical(SQ) == pytest.approx(LOG2, abs=1e-12)
    assert lyapunov_critical(CHEB) == pytest.approx(LOG2, abs=1e-12)
    assert lyapunov_critical(Poly1C([10, 0, 1])) == pytest.approx(LOG2 + G0_PLUS10, abs=1e-12)


def test_birkhoff_route_on_circle():
    mu = sample_measure(SQ, 30, 10_000, start=2.0, seed=3)
    rep = lyapunov(SQ, mu)
    assert rep.chi_birkhoff == pytest.approx(LOG2, abs=1e-9)


def test_birkhoff_matches_critical_for_escaping_parameter():
    f = Poly1C([10, 0, 1])
    mu = sample_measure(f, 30, 50_000, start=0.0 + 1j, seed=3)
    rep = lyapunov(f, mu)
    assert abs(rep.chi_birkhoff - rep.chi_critical) <= 3 * rep.stderr + 1e-9


def test_topological_exponent():
    assert chi_top_estimate(CHEB)["value"] == pytest.approx(math.log(4), abs=0.05)
    assert chi_top_estimate(SQ)["value"] == pytest.approx(LOG2, abs=0.05)


def test_dimension_of_cantor_julia_set_is_below_one():
    expected = LOG2 / (LOG2 + G0_PLUS10)
    assert dimension_estimate(Poly1C([10, 0, 1])) == pytest.approx(expected, abs=1e-9)
    assert dimension_estimate(SQ) == pytest.approx(1.0)


# --------------------------------------------------------- periodic points


def test_period_two_points_of_square():
    res = periodic_points(SQ, 2, reference=None)
    pts = sorted(((o.point, o.type) for o in res.orbits), key=lambda t: (t[0].real, t[0].imag))
    assert res.count == 4
    assert sum(t == "repelling" for _, t in pts) == 3
    zero = [o for o in res.orbits if abs(o.point) < 1e-12][0]
    assert zero.multiplier == 0 and zero.type == "attracting"


def test_fixed_points_of_z2_minus_1():
    res = periodic_points(Poly1C([-1, 0, 1]), 1, reference=None)
    pts = sorted(o.point.real for o in res.orbits)
    mult = sorted(o.multiplier.real for o in res.orbits)
    assert pts == pytest.approx([(1 - math.sqrt(5)) / 2, (1 + math.sqrt(5)) / 2], abs=1e-12)
    assert mult == pytest.approx([1 - math.sqrt(5), 1 + math.sqrt(5)], abs=1e-12)
    assert res.repelling_fraction == 1


@settings(max_examples=20, deadline=None)
@given(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False), st.integers(1, 5))
def test_periodic_points_are_periodic_and_typed_by_multiplier(c, n):
    f = Poly1C([c, 0, 1])
    res = periodic_points(f, n, reference=None)
    assert sum(o.multiplicity for o in res.orbits) == 2 ** n
    for o in res.orbits:
        assert abs(f.iterate(o.point, n) - o.point) <= 1e-6 * (1 + abs(o.point))
        if abs(o.multiplier) > 1 + 1e-6:
            assert o.type == "repelling"
        elif abs(o.multiplier) < 1 - 1e-6:
            assert o.type != "repelling"


# --------------------------------------------------------- mixing and sweep


def test_decorrelation_for_square_with_real_part():
    res = mixing_experiment(SQ, phi="re", n_max=4, N=20_000, seed=1)
    assert res.correlations[0] > 0
    assert all(abs(c) <= res.noise_floor for c in res.correlations[1:])


def test_unknown_observable():
    with pytest.raises(ValueError, match="unknown test function"):
        observable("sin")
    assert observable("gauss(1,0,0.5)")(np.array([1.0]))[0] == pytest.approx(1.0)


def test_quadratic_family_exponent_for_large_parameter():
    assert chi_quadratic(10.0) == pytest.approx(LOG2 + 0.5 * math.log(10), abs=0.05)


@settings(max_examples=30, deadline=None)
@given(st.complex_numbers(max_magnitude=4, allow_nan=False, allow_infinity=False))
def test_family_green_matches_single_map_route(t):
    values, errors = quadratic_family_green(np.array([t]))
    single = green(Poly1C([t, 0, 1]), 0)
    assert values[0] == pytest.approx(single.value, abs=1e-10 + errors[0] + single.error)


def test_sweep_grid_is_consistent():
    sweep = parameter_sweep("-2:2:-2:2:9:9")
    assert np.allclose(sweep.chi, LOG2 + sweep.green0)
    assert np.all(sweep.chi >= LOG2)
    assert sweep.submean_fraction >= 0.99


# -------------------------------------------------------- Hölder and balls


def test_holder_exponent_never_exceeds_lipschitz():
    for f in (SQ, CHEB, Poly1C([0.25j, 0, 1])):
        assert holder_estimate(f, pair_count=1500, seed=2).alpha <= 1.05


def test_ball_masses_on_circle_scale_linearly():
    mu = sample_measure(SQ, 30, 20_000, start=2.0, seed=1)
    table = ball_mass_check(SQ, mu, 1.0)
    assert table.bounded and table.excluded_radii
    # an arc of half-width r carries mass r / pi; small radii are dominated by sampling noise
    for r, m in zip(table.radii, table.max_mass):
        if r >= 0.05:
            assert m == pytest.approx(r / math.pi, rel=0.2)


def test_ball_masses_for_chebyshev_are_bounded_at_one_half():
    mu = EmpiricalMeasure(sample_measure(CHEB, 40, 20_000, start=0.3, seed=2).points)
    assert ball_mass_check(CHEB, mu, 0.5).bounded
