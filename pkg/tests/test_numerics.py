import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from degdyn.numerics import (EmpiricalMeasure, Grid, RandomStream, cauchy_bound, cluster, fresh_seed,
                             measure_distance, read_pgm, roots, roots_batch, stream,
                             unit_circle_measure, write_grid_csv, write_pgm)

# -------------------------------------------------------------------- roots


def test_roots_of_unity():
    rs = roots([-1, 0, 0, 0, 0, 1])
    assert rs.converged and len(rs) == 5
    assert np.allclose(np.sort_complex(rs.roots ** 5), np.ones(5), atol=1e-13)


def test_multiple_root_is_clustered():
    # (z - 1)^3 (z + 2); a triple root is only resolved to about eps^(1/3)
    c = np.polynomial.polynomial.polyfromroots([1, 1, 1, -2])
    assert len(roots(c)) == 4
    rs = roots(c, cluster_tol=1e-4)
    assert sorted(rs.multiplicities.tolist()) == [1, 3]
    assert rs.degree == 4


def test_zero_roots_are_exact():
    rs = roots([0] * 8 + [1])
    assert rs.roots.tolist() == [0] and rs.multiplicities.tolist() == [8]


def test_roots_across_many_scales():
    rs = roots(np.polynomial.polynomial.polyfromroots([2.0, 1e-200]))
    assert sorted(abs(rs.raw)) == pytest.approx([1e-200, 2.0], rel=1e-12)


def test_constant_polynomial_is_rejected():
    with pytest.raises(ValueError):
        roots([3])


def _separated(zs, gap=0.25):
    return all(abs(a - b) >= gap for i, a in enumerate(zs) for b in zs[i + 1:])


# multiple roots are only determined to eps^(1/m); they are covered by the clustering tests
@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=8).filter(_separated))
def test_vieta_relations(zs):
    c = np.polynomial.polynomial.polyfromroots(zs)
    rs = roots(c, cluster_tol=0)
    found = rs.raw
    assert len(found) == len(zs)
    scale = max(1.0, float(np.max(np.abs(c))))
    assert abs(found.sum() + c[-2] / c[-1]) <= 1e-7 * scale * len(zs)
    assert abs(np.prod(found) - (-1) ** len(zs) * c[0] / c[-1]) <= 1e-7 * scale ** 2
    assert np.all(np.abs(found) <= cauchy_bound(c) + 1e-9)


def test_batch_solver_matches_single():
    rng = np.random.default_rng(4)
    coeffs = rng.normal(size=(6, 4)) + 1j * rng.normal(size=(6, 4))
    batch = roots_batch(coeffs)
    zs = batch[0] if isinstance(batch, tuple) else batch
    for row, found in zip(coeffs, zs):
        expected = np.sort_complex(roots(row).raw)
        assert np.allclose(np.sort_complex(found), expected, atol=1e-9)


def test_cluster_merges_within_tolerance():
    centers, sizes = cluster(np.array([0, 1e-9, 1, 1 + 2e-9j]), 1e-6)
    assert sorted(sizes.tolist()) == [2, 2] and len(centers) == 2


# ------------------------------------------------------------------ streams


def test_stream_is_deterministic():
    a = stream(7, 3).uniform(10)
    b = stream(7, 3).uniform(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, stream(7, 4).uniform(10))


@settings(max_examples=25)
@given(st.integers(0, 2**64 - 1), st.integers(0, 2**20))
def test_streams_replay_for_any_key(seed, index):
    assert np.array_equal(RandomStream(seed, index).normal(4), RandomStream(seed, index).normal(4))


def test_choice_frequencies_are_uniform():
    draws = stream(1).choice(4, 200_000)
    freq = np.bincount(draws, minlength=4) / len(draws)
    assert np.all(np.abs(freq - 0.25) <= 4 * np.sqrt(0.25 * 0.75 / len(draws)))


def test_unit_disk_and_circle_samples():
    rs = stream(2)
    assert np.all(np.abs(rs.unit_disk(1000)) <= 1)
    assert np.allclose(np.abs(rs.unit_circle(1000)), 1)


def test_seed_bounds():
    with pytest.raises(ValueError):
        RandomStream(-1)
    assert 0 <= fresh_seed() < 2**64


# ------------------------------------------------------------------ measures


def test_distance_is_zero_on_identical_measures():
    mu = EmpiricalMeasure(stream(3).unit_disk(200))
    assert measure_distance(mu, mu) == 0


def test_circle_sample_is_close_to_arc_length():
    mu = EmpiricalMeasure(np.exp(2j * np.pi * np.arange(4096) / 4096))
    assert measure_distance(mu, unit_circle_measure()) <= 1e-6


cloud = st.lists(st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
                 min_size=1, max_size=12).map(EmpiricalMeasure)


@settings(max_examples=40, deadline=None)
@given(cloud, cloud, cloud)
def test_distance_is_a_pseudometric_on_a_fixed_probe_set(a, b, c):
    probes = 3 * stream(5).unit_disk(32) + 0.1
    d = lambda x, y: measure_distance(x, y, probes)
    assert d(a, b) >= 0
    assert d(a, b) == pytest.approx(d(b, a), abs=1e-12)
    assert d(a, c) <= d(a, b) + d(b, c) + 1e-9


@settings(max_examples=30, deadline=None)
@given(cloud, cloud)
def test_default_probes_do_not_depend_on_argument_order(a, b):
    assert measure_distance(a, b) == pytest.approx(measure_distance(b, a), abs=1e-12)


def test_measure_csv_and_json_round_trip(tmp_path):
    mu = EmpiricalMeasure([1 + 2j, -0.5j, 3], [1, 2, 1])
    mu.to_csv(tmp_path / "m.csv")
    back = EmpiricalMeasure.from_csv(tmp_path / "m.csv")
    assert np.array_equal(back.points, mu.points) and np.allclose(back.weights, mu.weights)
    again = EmpiricalMeasure.from_json(mu.to_json())
    assert np.array_equal(again.points, mu.points)


def test_bad_weights_are_rejected():
    with pytest.raises(ValueError):
        EmpiricalMeasure([1, 2], [1, -1])


# --------------------------------------------------------------------- grids


def test_grid_parse_square_pixels():
    g = Grid.parse("-2:2:-1:1:41")
    assert (g.nx, g.ny) == (41, 20)
    assert g.points().shape == (20, 41)
    assert g.points()[0, 0] == complex(-2, 1)


@pytest.mark.parametrize("spec", ["1:0:0:1:4", "0:1:0:1", "0:1:0:1:x"])
def test_bad_grid_specs(spec):
    with pytest.raises(ValueError):
        Grid.parse(spec)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 30), st.integers(2, 30), st.integers(0, 1000))
def test_pgm_round_trip(nx, ny, seed):
    import tempfile
    values = np.random.default_rng(seed).normal(size=(ny, nx))
    with tempfile.TemporaryDirectory() as d:
        path = f"{d}/v.pgm"
        meta = write_pgm(path, values)
        back, meta2 = read_pgm(path)
    assert back.shape == values.shape and meta == meta2
    assert np.max(np.abs(back - values)) <= meta["scale"] / 2 + 1e-12


def test_grid_csv(tmp_path):
    g = Grid.parse("0:1:0:1:3:2")
    write_grid_csv(tmp_path / "g.csv", g, np.arange(6.0), name="G")
    lines = (tmp_path / "g.csv").read_text().splitlines()
    assert lines[0] == "re,im,G" and len(lines) == 7
