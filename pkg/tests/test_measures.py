from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nonsalem.errors import DimensionMismatch, MeasureError
from nonsalem.measures import (
    RANDOM_PROFILES,
    AtomicMeasure,
    GridMeasure,
    approximant_measure,
    grid_point_mass,
    localize,
    make_atomic,
    make_uniform_grid,
    power_measure,
    product_measure,
    random_measure,
    spline_bump,
)


def total(mu):
    return float(np.sum(mu.weights if isinstance(mu, AtomicMeasure) else mu.mass))


# -- constructors -------------------------------------------------------------


def test_single_atom_is_renormalized():
    mu = make_atomic([[0.0]], [5.0])
    assert mu.points.tolist() == [[0.0]]
    assert mu.weights.tolist() == [1.0]


def test_two_equal_atoms_split_mass():
    mu = make_atomic([[0.0], [0.5]], [1, 1])
    assert mu.weights.tolist() == [0.5, 0.5]


def test_planar_point_mass():
    mu = make_atomic([[0.25, 0.75]], [1])
    assert mu.dim == 2 and len(mu) == 1


def test_uniform_grid_examples():
    assert make_uniform_grid(1, 4).mass.tolist() == [0.25] * 4
    assert make_uniform_grid(2, 2).mass.tolist() == [[0.25, 0.25], [0.25, 0.25]]
    assert total(make_uniform_grid(1, 1000)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("points, weights", [
    ([[0.1]], [-1.0]),
    ([[0.1]], [0.0]),
    ([[0.1]], [float("nan")]),
])
def test_atomic_rejects_bad_input(points, weights):
    with pytest.raises(MeasureError):
        make_atomic(points, weights)


def test_atomic_count_mismatch():
    with pytest.raises(DimensionMismatch):
        make_atomic([[0.1], [0.2]], [1.0])


def test_atomic_points_wrap_onto_torus():
    mu = make_atomic([[1.25], [-0.25]], [1, 1])
    assert mu.points.ravel().tolist() == [0.25, 0.75]


def test_measures_are_read_only():
    mu = make_uniform_grid(1, 8)
    with pytest.raises(ValueError):
        mu.mass[0] = 1.0


def test_product_of_grids_is_outer_product():
    a = random_measure(1, 8, 0, "rough-density")
    b = random_measure(1, 8, 1, "rough-density")
    ab = product_measure(a, b)
    assert isinstance(ab, GridMeasure) and ab.dim == 2
    np.testing.assert_allclose(ab.mass, np.outer(a.mass, b.mass), rtol=1e-14)
    assert power_measure(a, 3).dim == 3


# -- localize -----------------------------------------------------------------


def test_localize_is_identity_when_profile_covers_support():
    u = make_uniform_grid(1, 1024)
    out = localize(u, [0.5], 0.6)
    assert np.max(np.abs(out.mass - u.mass)) < 1e-12


def test_localize_keeps_point_mass():
    mu = grid_point_mass(1, 64, [0.25])
    for radius in (0.01, 0.1, 0.4):
        np.testing.assert_array_equal(localize(mu, [0.25], radius).mass, mu.mass)


def test_localize_kills_mass_beyond_doubled_radius():
    u = make_uniform_grid(1, 1024)
    out = localize(u, [0.25], 0.1)
    c = u.centers()
    assert out.mass[(c < 0.05) | (c > 0.45)].sum() == 0.0


def test_localize_matches_scalar_loop():
    u = make_uniform_grid(1, 256)
    out = localize(u, [0.25], 0.1)
    raw = []
    for j in range(256):
        x = (j + 0.5) / 256
        rho = min(abs(x - 0.25), 1 - abs(x - 0.25))
        t = min(max((rho - 0.1) / 0.1, 0.0), 1.0)
        raw.append((1 - t * t) ** 2 / 256)
    np.testing.assert_allclose(out.mass, np.array(raw) / sum(raw), rtol=1e-12, atol=1e-15)


def test_localize_rejects_massless_ball():
    with pytest.raises(MeasureError):
        localize(grid_point_mass(1, 64, [0.25]), [0.75], 0.1)
    with pytest.raises(DimensionMismatch):
        localize(make_uniform_grid(2, 8), [0.5], 0.1)


@given(st.floats(0.0, 0.999), st.floats(0.51, 2.0))
def test_localize_idempotent_when_profile_is_one(center, radius):
    u = make_uniform_grid(1, 128)
    once = localize(u, [center], radius)
    twice = localize(once, [center], radius)
    np.testing.assert_allclose(twice.mass, once.mass, atol=1e-15)


def test_spline_bump_shape():
    np.testing.assert_allclose(spline_bump([0.0, 0.1, 0.15, 0.2, 0.3], 0.1), [1, 1, 0.5625, 0, 0])


# -- approximant --------------------------------------------------------------


def test_approximant_two_intervals():
    mu = approximant_measure(1.0, 1, 1, [2], 64, delta_rule=lambda q: 0.25)
    c = mu.centers()
    inside = np.abs(2 * c - np.rint(2 * c)) < 0.25
    assert mu.meta["fraction"] == 0.5
    np.testing.assert_allclose(mu.mass[inside], 1 / 32)
    assert mu.mass[~inside].sum() == 0
    # two runs of 16 cells: [0, 1/8), (3/8, 5/8), (7/8, 1) wraps into one interval on the torus
    runs = np.flatnonzero(np.diff(np.r_[inside, inside[0]].astype(int)) == 1)
    assert len(runs) == 2


def test_approximant_single_wide_slab():
    mu = approximant_measure(1.0, 1, 1, [1], 64, delta_rule=lambda q: 0.49)
    assert mu.support_size() == 62
    assert mu.meta["fraction"] == pytest.approx(62 / 64)


def test_approximant_vertical_slabs():
    mu = approximant_measure(1.0, 2, 1, [(1, 0)], 64, delta_rule=lambda q: 0.25)
    assert mu.meta["fraction"] == 0.5
    marginal = mu.mass.sum(axis=1)
    assert np.all(marginal[16:48] == 0)


def test_approximant_validates():
    with pytest.raises(MeasureError):
        approximant_measure(1.0, 1, 1, [8], 16)
    with pytest.raises(MeasureError):
        approximant_measure(1.0, 1, 1, [], 64)
    with pytest.raises(DimensionMismatch):
        approximant_measure(1.0, 2, 1, [3], 64)
    with pytest.raises(MeasureError):
        approximant_measure(1.0, 1, 1, [3, 4], 256, depth=3)


def _cells_meeting_slabs(N, qs, delta):
    """Cells whose closed cube meets some slab ``||q.x|| < delta``.

    With N a power of two and a dyadic delta every quantity below is an exact
    binary fraction, so the float arithmetic is exact rational arithmetic.
    """
    i, j = np.meshgrid(np.arange(N), np.arange(N), indexing="ij")
    hit = np.zeros((N, N), dtype=bool)
    for q in qs:
        corners = [(q[0] * (i + a) + q[1] * (j + b)) / N for a in (0, 1) for b in (0, 1)]
        lo, hi = np.minimum.reduce(corners), np.maximum.reduce(corners)
        contains_integer = np.ceil(lo) <= hi
        hit |= contains_integer | (lo - np.floor(lo) < delta) | (np.ceil(hi) - hi < delta)
    return hit


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)).filter(any), min_size=1, max_size=3),
       st.sampled_from([Fraction(1, 8), Fraction(3, 16), Fraction(1, 4)]))
def test_approximant_mass_only_on_cells_meeting_slabs(qs, delta):
    N = 128
    mu = approximant_measure(1.0, 2, 1, qs, N, delta_rule=lambda q: float(delta))
    allowed = _cells_meeting_slabs(N, qs, float(delta))
    assert mu.mass[~allowed].sum() == 0.0


def test_approximant_depth_intersects_levels():
    shallow = approximant_measure(1.0, 1, 1, list(range(3, 9)), 256)
    deep = approximant_measure(1.0, 1, 1, list(range(3, 9)), 256, depth=2)
    assert np.all(shallow.mass[deep.mass > 0] > 0)
    assert deep.support_size() < shallow.support_size()


# -- random -------------------------------------------------------------------


@pytest.mark.parametrize("profile", RANDOM_PROFILES)
def test_random_is_deterministic(profile):
    a = random_measure(2, 16, 7, profile)
    b = random_measure(2, 16, 7, profile)
    np.testing.assert_array_equal(a.mass, b.mass)
    assert not np.array_equal(a.mass, random_measure(2, 16, 8, profile).mass)


@given(st.integers(0, 10_000), st.integers(1, 2), st.integers(2, 40))
def test_sparse_atoms_cap(seed, d, N):
    mu = random_measure(d, N, seed, "sparse-atoms")
    assert mu.support_size() <= math.ceil(math.sqrt(N)) ** d


@given(st.integers(0, 10_000), st.sampled_from(RANDOM_PROFILES), st.integers(1, 3), st.integers(2, 16))
def test_generators_are_probability_measures(seed, profile, d, N):
    mu = random_measure(d, N, seed, profile)
    assert np.all(mu.mass >= 0)
    assert total(mu) == pytest.approx(1.0, abs=1e-12)


def test_unknown_profile():
    with pytest.raises(MeasureError):
        random_measure(1, 8, 0, "plaid")
