"""Newton polygon tests: fixtures with exact rational answers plus
property-based checks of the structural guarantees."""

import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_strings.fixtures import all_fixtures, cascade_system, get_fixture
from resonance_strings.model import system_of
from resonance_strings.polygon import (
    NonGenericError, build_polygon, check_genericity, dominant_pair,
    interval_partition, pair_points, slope_margin, string_count_bound)


def test_pair_points_count_and_origin():
    sys3 = system_of(0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0])
    pts = pair_points(sys3)
    assert pts[0].is_origin
    assert sum(len(p.pairs) for p in pts) == 3  # C(3,2)


def test_three_barrier_polygon_exact():
    fx = get_fixture("three-barrier")
    poly = build_polygon(fx.system)
    coords = {(p.lam, p.nu) for p in poly.points}
    assert coords == {(F(0), F(0)), (F(8), F(1)), (F(4), F(5, 2)),
                      (F(12), F(5, 2))}
    hull = [(p.lam, p.nu) for p in poly.hull]
    assert hull == [(F(0), F(0)), (F(8), F(1)), (F(12), F(5, 2))]
    assert tuple(s.gamma for s in poly.slopes) == (F(1, 8), F(3, 8))
    assert poly.slopes[0].kind == "dominant"
    assert poly.slopes[0].pair == (1, 2)
    assert poly.slopes[1].kind == "flat"
    assert poly.slopes[1].pair == (2, 3)


def test_four_c_hull_exact():
    fx = get_fixture("four-c")
    poly = build_polygon(fx.system)
    hull = [(p.lam, p.nu) for p in poly.hull]
    assert hull == [(F(0), F(0)), (F(6), F(1)), (F(10), F(5, 2)),
                    (F(12), F(4))]


def test_all_generic_fixtures_match_expected():
    for name, fx in all_fixtures().items():
        if not fx.generic:
            continue
        poly = build_polygon(fx.system)
        slopes = tuple(s.gamma for s in poly.slopes)
        if fx.expected_slopes is not None:
            assert slopes == fx.expected_slopes, name
        if fx.expected_count is not None:
            assert len(slopes) == fx.expected_count, name
        pairs, _ = dominant_pair(fx.system)
        assert pairs == [fx.expected_dominant], name


def test_cascade_reaches_maximal_count():
    for n in range(2, 9):
        poly = build_polygon(cascade_system(n))
        assert len(poly.slopes) == n - 1


def test_dominant_pair_equal_strength():
    for n in (2, 4, 6):
        sysn = system_of(0.1, [float(j * j) for j in range(n)], [1.0] * n)
        pairs, gamma = dominant_pair(sysn)
        assert pairs == [(1, n)]
        assert gamma == F(2) / F(2 * (n - 1) ** 2)


def test_nongeneric_fixture_flagged_with_coincidence():
    fx = get_fixture("symmetric-tie")
    report = check_genericity(fx.system)
    assert not report.generic
    assert any("gammatilde_12 = gammatilde_34" in m for m in report.messages)
    with pytest.raises(NonGenericError):
        interval_partition(build_polygon(fx.system))


def test_dominant_tie_flagged():
    # gamma_12 = gamma_13 = 1: two pairs tie for the dominant slope
    sys3 = system_of(0.1, [0.0, 1.0, 2.0], [1.0, 1.0, 3.0])
    pairs, gamma = dominant_pair(sys3)
    assert pairs == [(1, 2), (1, 3)] and gamma == 1
    report = check_genericity(sys3)
    assert not report.generic
    assert any("tie" in m for m in report.messages)


def test_interval_partition_three_barrier():
    poly = build_polygon(get_fixture("three-barrier").system)
    partition, position = interval_partition(poly)
    assert partition == [1, 2, 3]
    assert position == 1


def test_interval_partition_four_c():
    poly = build_polygon(get_fixture("four-c").system)
    partition, position = interval_partition(poly)
    assert partition == [1, 2, 3, 4]
    assert position == 2  # dominant pair (2,3) occupies positions 2,3


def test_interval_partition_four_a_skips_interior():
    poly = build_polygon(get_fixture("four-a").system)
    partition, position = interval_partition(poly)
    assert partition == [1, 4]
    assert position == 1


def test_string_count_bounds_fixture():
    fx = get_fixture("four-c")
    assert string_count_bound(fx.system) == (3, 3)
    fx = get_fixture("four-d")
    nb, kb = string_count_bound(fx.system)
    assert (nb, kb) == (3, 3)
    assert len(build_polygon(fx.system).slopes) == 2  # strict inequality


def test_slope_margin_positive_for_generic():
    poly = build_polygon(get_fixture("three-barrier").system)
    for i in range(len(poly.slopes)):
        assert slope_margin(poly, i) > 0


# --- property-based checks ---------------------------------------------

def _random_generic_system(rng: random.Random, n: int):
    """Random system; resample until generic (almost surely immediate)."""
    while True:
        xs, x = [], 0.0
        for _ in range(n):
            xs.append(x)
            x += rng.uniform(0.5, 3.0)
        betas = [rng.uniform(0.1, 4.0) for _ in range(n)]
        sysn = system_of(0.1, xs, betas)
        if check_genericity(sysn).generic:
            return sysn


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 8), st.randoms(use_true_random=False))
def test_bounds_and_nesting_properties(n, rng):
    sysn = _random_generic_system(rng, n)
    poly = build_polygon(sysn)
    pairs, _ = dominant_pair(sysn)
    J, K = pairs[0]
    assert len(poly.slopes) <= n - 1
    assert len(poly.slopes) <= n - K + J
    partition, position = interval_partition(poly)  # asserts nesting inside
    assert partition[0] == 1 and partition[-1] == n
    assert (partition[position - 1], partition[position]) == (J, K)
    # slope sequence strictly increases and opens with the dominant slope
    gammas = [s.gamma for s in poly.slopes]
    assert all(a < b for a, b in zip(gammas, gammas[1:]))
    assert poly.slopes[0].kind == "dominant"
    assert all(s.kind == "flat" for s in poly.slopes[1:])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.randoms(use_true_random=False))
def test_polygon_invariant_under_translation(n, rng):
    sysn = _random_generic_system(rng, n)
    shifted = system_of(sysn.h, [d.x + 17.0 for d in sysn.deltas],
                        [d.beta for d in sysn.deltas])
    a = build_polygon(sysn)
    b = build_polygon(shifted)
    # shifted positions round differently, so compare within float tolerance
    assert len(a.slopes) == len(b.slopes)
    for sa, sb in zip(a.slopes, b.slopes):
        assert float(sa.gamma) == pytest.approx(float(sb.gamma), rel=1e-9)
        assert sa.pair == sb.pair


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.randoms(use_true_random=False))
def test_polygon_independent_of_couplings(n, rng):
    sysn = _random_generic_system(rng, n)
    recoupled = system_of(sysn.h, [d.x for d in sysn.deltas],
                          [d.beta for d in sysn.deltas],
                          [rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 10.0)
                           for _ in range(n)])
    a = build_polygon(sysn)
    b = build_polygon(recoupled)
    assert [s.gamma for s in a.slopes] == [s.gamma for s in b.slopes]
