import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degdyn.degrees import (DegreeGuardError, concavity_ok, degree_sequence, exact_degrees,
                            fixed_point_count, hyperbolicity_verdict, match_class, max_convolution,
                            modular_degrees, monomial_degrees, quadratic_classify_degrees,
                            ratio_estimate, skew_degrees, skew_degrees_bruteforce, submultiplicative,
                            topological_degree)
from degdyn.mapalg import parse_map

PHI = (1 + math.sqrt(5)) / 2


def test_unstable_quadratic_map_on_p2():
    rep = degree_sequence(parse_map("[z*w+t^2 : z*t+t^2 : t^2]", "proj"), 2, seed=1)
    assert rep.degrees == [2, 3] and not rep.stable


def test_fibonacci_bidegrees_on_p1xp1():
    rep = degree_sequence(parse_map("(z*w+1, z+2)", "biproj"), 10, seed=1)
    assert rep.stable
    assert rep.degrees[-1] == [[89, 55], [55, 34]]
    assert rep.lambda1.value == pytest.approx(PHI, abs=1e-12)


def test_henon_is_stable_on_p2():
    rep = degree_sequence(parse_map("(z^2+1-w, z)", "proj"), 6, seed=1)
    assert rep.degrees == [2, 4, 8, 16, 32, 64]
    assert rep.stable and rep.lambda1.value == 2 and rep.lambda1.err == 0


@pytest.mark.parametrize("text,model,N", [
    ("(z*w+1, z+2)", "proj", 7),
    ("(z*w+1, z+2)", "biproj", 7),
    ("(w^2, z^2+w^3)", "proj", 4),
    ("(z+w, z*w+1)", "proj", 6),
    ("[y*z : x*z : x*y]", "proj", 5),
    ("[x1*x2*x3 : x0*x2*x3 : x0*x1*x3 : x0*x1*x2]", "proj_3", 4),
])
def test_modular_and_exact_degrees_agree(text, model, N):
    f = parse_map(text, model)
    assert modular_degrees(f, N, seed=3) == exact_degrees(f, N)


def test_degree_guard_reports_largest_safe_n():
    with pytest.raises(DegreeGuardError) as exc:
        modular_degrees(parse_map("(z^2, w^2)", "proj"), 30, cap=1000)
    assert exc.value.largest_safe_n == 9


def test_birational_invariance_between_models():
    p2 = degree_sequence(parse_map("(z*w+1, z+2)", "proj"), 14, seed=2)
    p1p1 = degree_sequence(parse_map("(z*w+1, z+2)", "biproj"), 14, seed=2)
    assert not p2.stable and p1p1.stable
    assert abs(p2.lambda1.value - p1p1.lambda1.value) <= 1e-3


def test_ratio_estimate_on_geometric_sequence():
    est = ratio_estimate([3 ** n for n in range(1, 12)])
    assert est.value == pytest.approx(3, abs=1e-12)


# ----------------------------------------------------- topological degree


@pytest.mark.parametrize("text,expected", [
    ("(z^2+1-w, z)", 1), ("(w^2, z^2+w^3)", 4), ("(z^2, w^2)", 4), ("(w+1, z*w+2)", 1),
    ("(z*w, z^2+w)", 3), ("(w, z^2)", 2),
])
def test_topological_degree(text, expected):
    assert topological_degree(parse_map(text), trials=3, seed=5) == expected


# -------------------------------------------------- fixed points on C^2


def test_fixed_points_of_power_map_with_lefschetz_total():
    res = fixed_point_count(parse_map("(z^2, w^2)"), 1, seed=0, holomorphic=True)
    assert res.affine_count == 4 and res.lefschetz_total == 7
    assert res.affine_count <= res.lefschetz_total


def test_fixed_points_of_henon_are_a_double_root():
    res = fixed_point_count(parse_map("(z^2+1-w, z)"), 1, seed=0)
    assert res.affine_count == 2 and res.multiplicities == [2]


def test_period_zero_is_rejected():
    with pytest.raises(ValueError, match="period"):
        fixed_point_count(parse_map("(z^2+1-w, z)"), 0)


# ------------------------------------------------------- closed forms


@pytest.mark.parametrize("d,expected", [
    ([2, 3], [1, 3, 6]), ([2], [1, 2]), ([2, 2, 5], [1, 5, 10, 20]),
])
def test_skew_degrees(d, expected):
    assert skew_degrees(d) == expected


@settings(max_examples=80)
@given(st.lists(st.integers(2, 9), min_size=1, max_size=6))
def test_skew_degrees_match_subset_enumeration(d):
    assert skew_degrees(d) == skew_degrees_bruteforce(d)


@settings(max_examples=80)
@given(st.lists(st.integers(2, 9), min_size=1, max_size=4),
       st.lists(st.integers(2, 9), min_size=1, max_size=4))
def test_product_formula(a, b):
    assert skew_degrees(a + b) == max_convolution(skew_degrees(a), skew_degrees(b))


@settings(max_examples=80)
@given(st.lists(st.integers(2, 9), min_size=1, max_size=6))
def test_skew_lambda_lists_are_concave(d):
    lam = skew_degrees(d)
    assert concavity_ok(lam) and all(x >= 1 for x in lam)


def test_monomial_fibonacci_matrix():
    res = monomial_degrees([[1, 1], [1, 0]], N=8)
    assert res.lambda1 == pytest.approx(PHI, abs=1e-12) and res.lambdak == 1
    assert res.sequence_matches and res.bidegrees == res.abs_powers


def test_monomial_scalar_matrix():
    res = monomial_degrees([[2, 0], [0, 2]], N=4)
    assert res.lambda1 == pytest.approx(2) and res.lambdak == 4


def test_monomial_cat_map():
    res = monomial_degrees([[2, 1], [1, 1]], N=4)
    assert res.lambda1 == pytest.approx((3 + math.sqrt(5)) / 2, abs=1e-12) and res.lambdak == 1
    assert res.lambda1_power == pytest.approx(res.lambda1, abs=1e-9)


def test_monomial_intermediate_degrees_are_labeled_predictions():
    res = monomial_degrees([[1, 1, 0], [0, 1, 1], [1, 0, 2]])
    assert res.bidegrees is None
    assert "conjectural" in res.predictions["status"]
    assert res.predictions["lambda_j"][-1] == pytest.approx(res.lambdak)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4)
       .filter(lambda v: v[0] * v[3] - v[1] * v[2] != 0))
def test_monomial_bidegrees_equal_absolute_powers(v):
    res = monomial_degrees([[v[0], v[1]], [v[2], v[3]]], N=5)
    assert res.bidegrees == res.abs_powers


@pytest.mark.parametrize("lam,dominant,bound", [
    ([1, PHI, 1], 1, math.log(PHI)), ([1, 2, 4], 2, math.log(4)), ([1, 2, 2], None, math.log(2)),
])
def test_hyperbolicity_verdict(lam, dominant, bound):
    v = hyperbolicity_verdict(lam)
    assert v.dominant_l == dominant and v.entropy_bound == pytest.approx(bound)


def test_concavity_detects_a_violation():
    assert not concavity_ok([1, 2, 5])


def test_quadratic_skew_representative():
    res = quadratic_classify_degrees(parse_map("(w^2, z^2+w^2)"), seed=0)
    assert (res.lambda1, res.lambda2) == (2.0, 4) and res.matched_class == "skew(2,4)"


def test_unmatched_pair_has_no_class():
    assert match_class(3.0, 1.0) is None


# ------------------------------------------------------------ invariants


@pytest.mark.parametrize("text,model,N", [
    ("(z*w+1, z+2)", "proj", 10), ("(z+w, z*w+1)", "proj", 10), ("(w^2, z^2+w^3)", "proj", 6),
    ("[x1*x2*x3 : x0*x2*x3 : x0*x1*x3 : x0*x1*x2]", "proj_3", 6),
])
def test_submultiplicativity(text, model, N):
    d = degree_sequence(parse_map(text, model), N, seed=4).degrees
    assert submultiplicative(d)
    for n, m in itertools.product(range(1, N), repeat=2):
        if n + m <= N:
            assert d[n + m - 1] <= d[n - 1] * d[m - 1]


@pytest.mark.parametrize("text,model", [("(z^2+1-w, z)", "proj"), ("(z*w+1, z+2)", "biproj"),
                                        ("(z^3, w^3)", "proj")])
def test_stable_maps_report_d1_exactly(text, model):
    rep = degree_sequence(parse_map(text, model), 6, seed=4)
    assert rep.stable and rep.lambda1.err == 0
    if model == "proj":
        assert rep.lambda1.value == rep.degrees[0]
