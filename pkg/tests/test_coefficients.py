import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from rfiqkd import A_MAX, CoefficientPoint, InconsistentTableError, ProbabilityTable, Side
from rfiqkd.coefficients import (
    consistency_check,
    enumerate_feasible,
    feasible_region,
    is_feasible,
    side_row_spec,
)

from conftest import table

H = 1 / math.sqrt(2)


def _margin(point, spec):
    """Smallest slack of the quadratic constraints; negative means violated."""
    a0, a1 = point
    slacks = [1.0 - (a0 - a1) ** 2, (a0 + a1) ** 2 - 1.0, a0, a1, A_MAX - a0, A_MAX - a1]
    for pk, p0, p1 in spec.triples:
        slacks.append(2 * math.sqrt(p0 * p1) * a0 * a1 - abs(pk - p0 * a0 * a0 - p1 * a1 * a1))
    return min(slacks)


def _inside(region, point, tol=0.0):
    x, y = point
    return all(a * x + b * y <= c + tol for a, b, c in region.halfplanes)


def test_ideal_coefficients_feasible():
    spec = side_row_spec(table(0.0, 1.0), Side.ALICE, 2)
    assert is_feasible(CoefficientPoint(H, H), spec)


def test_zero_cross_term_pins_coefficient():
    spec = side_row_spec(table(0.0, 1.0), Side.ALICE, 2)
    assert not is_feasible(CoefficientPoint(0.9, 0.9), spec)


def test_normalization_excludes_small_points():
    spec = side_row_spec(ProbabilityTable(np.full((4, 4), 0.25)), Side.BOB, 3)
    assert not is_feasible(CoefficientPoint(0.2, 0.2), spec)


def test_noiseless_grid_collapses_to_ideal_point():
    spec = side_row_spec(table(0.0, 0.0), Side.ALICE, 2)
    h = A_MAX / 300
    pts = enumerate_feasible(spec, 301)
    assert pts
    assert all(math.hypot(p.a0 - H, p.a1 - H) <= 2 * h for p in pts)


def test_noisy_band_contains_ideal_point():
    spec = side_row_spec(table(0.01, math.pi / 4), Side.ALICE, 2)
    region = feasible_region(spec)
    assert _inside(region, (H, H))
    assert region.extent > 0.05
    pts = enumerate_feasible(spec, 301)
    assert len(pts) > 10


def test_unreachable_probability_is_inconsistent():
    p = np.full((4, 4), 0.25)
    p[2, 0], p[0, 0], p[1, 0] = 1.0, 0.01, 0.01
    spec = side_row_spec(ProbabilityTable(p), Side.ALICE, 2)
    assert feasible_region(spec).empty
    with pytest.raises(InconsistentTableError):
        enumerate_feasible(spec)


def test_consistency_ignores_checking_block():
    p = table(0.0, math.pi).p.copy()
    p[2, 2] = 1.0
    regions = consistency_check(ProbabilityTable(p))
    assert set(regions) == {"alice2", "alice3", "bob2", "bob3"}


def test_consistency_lists_failing_side():
    p = table(0.0, 0.0).p.copy()
    p[2, 0], p[0, 0], p[1, 0] = 0.9, 0.05, 0.05
    with pytest.raises(InconsistentTableError) as exc:
        consistency_check(ProbabilityTable(p))
    assert "alice k=2" in exc.value.failures


@pytest.mark.parametrize("e_b", [0.0, 0.005, 0.02, 0.2])
@pytest.mark.parametrize("theta", np.linspace(0, 2 * math.pi, 7))
def test_channel_tables_consistent(e_b, theta):
    consistency_check(table(e_b, theta))


probs = st.floats(0.0, 1.0)


@settings(max_examples=400, deadline=None)
@given(
    st.tuples(probs, probs, probs),
    st.tuples(probs, probs, probs),
    st.floats(0.0, A_MAX),
    st.floats(0.0, A_MAX),
)
def test_polygon_matches_quadratic_form(t1, t2, a0, a1):
    grid = np.full((4, 4), 0.25)
    grid[2, 0], grid[0, 0], grid[1, 0] = t1
    grid[2, 1], grid[0, 1], grid[1, 1] = t2
    spec = side_row_spec(ProbabilityTable(grid), Side.ALICE, 2)
    m = _margin((a0, a1), spec)
    assume(abs(m) > 1e-9)
    region = feasible_region(spec, eps=0.0)
    assert _inside(region, (a0, a1)) == (m > 0)
    assert is_feasible(CoefficientPoint(a0, a1), spec, eps=0.0) == (m > 0)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.0, 2 * math.pi), st.sampled_from(["alice", "bob"]), st.sampled_from([2, 3]))
def test_polygon_samples_are_feasible(e_b, theta, side, k):
    spec = side_row_spec(table(e_b, theta), side, k)
    region = feasible_region(spec)
    a0, a1, _ = region.sample(9)
    for x, y in zip(a0, a1):
        assert is_feasible(CoefficientPoint(x, y), spec, eps=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.0, 0.5), st.floats(0.0, 2 * math.pi))
def test_grid_scan_covers_polygon_vertices(e_b, theta):
    spec = side_row_spec(table(e_b, theta), Side.BOB, 3)
    region = feasible_region(spec)
    pts = np.array([p.as_tuple() for p in enumerate_feasible(spec, 101)])
    h = A_MAX / 100
    for v in region.vertices:
        assert np.min(np.hypot(*(pts - v).T)) <= h
