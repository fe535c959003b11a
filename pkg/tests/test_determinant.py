"""Determinant evaluator tests: the matrix oracle, the scaled closed form,
and the recurrence must all agree; index-set enumeration is checked against
its combinatorial count."""

import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_strings.determinant import (
    MAX_ENUMERATION_N, assemble_boundary_matrix, closed_form,
    closed_form_field, direct_determinant, direct_scaled, enumerate_index_sets,
    log_scale_c, recurrence_form, truncated_form)
from resonance_strings.model import OverflowGuardError, system_of


def _random_system(rng, n, h=0.1):
    xs, x = [], 0.0
    for _ in range(n):
        xs.append(x)
        x += rng.uniform(0.5, 2.5)
    betas = [rng.uniform(0.3, 3.0) for _ in range(n)]
    cs = [rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 5.0) for _ in range(n)]
    return system_of(h, xs, betas, cs)


def _random_z(rng):
    return complex(rng.uniform(0.2, 2.0), rng.uniform(-0.5, -0.01))


def test_enumeration_counts():
    # number of interleaved tuples = number of even nonempty subsets
    for n in range(2, 9):
        expected = 2 ** (n - 1) - 1
        assert len(enumerate_index_sets(n)) == expected


def test_enumeration_small_cases():
    assert enumerate_index_sets(2) == [((1, 2),)]
    got = set(enumerate_index_sets(4))
    assert got == {((1, 2),), ((1, 3),), ((1, 4),), ((2, 3),), ((2, 4),),
                   ((3, 4),), ((1, 2), (3, 4),)}


def test_enumeration_rejects_large_n():
    with pytest.raises(ValueError):
        enumerate_index_sets(MAX_ENUMERATION_N + 1)


def test_n1_determinant_matches_scale():
    # with one barrier Dtilde_1 = 1, so det = c exactly
    sys1 = system_of(0.1, [1.3], [1.5], [2.0])
    z = 0.8 - 0.1j
    det = direct_determinant(sys1, z).value
    c = cmath.exp(log_scale_c(sys1, z))
    assert abs(det - c) <= 1e-12 * abs(c)


def test_n2_closed_form_hand_formula():
    # Dtilde_2 = 1 - R_1 R_2 omega**(2 l)
    sys2 = system_of(0.1, [0.0, 6.0], [2.0, 2.0])
    z = 0.9 - 0.05j
    q1, q2 = sys2.coupling(1), sys2.coupling(2)
    r1 = q1 / (2j * z - q1)
    r2 = q2 / (2j * z - q2)
    expected = 1.0 - r1 * r2 * cmath.exp(1j * z * 12.0 / 0.1)
    value, _ = closed_form_field(sys2, z)
    assert complex(value) == pytest.approx(expected, rel=1e-13)


def test_direct_equals_scaled_closed_form():
    rng = random.Random(7)
    for _ in range(40):
        sysn = _random_system(rng, rng.randint(2, 6))
        z = _random_z(rng)
        dtilde = complex(closed_form_field(sysn, z)[0])
        scaled = direct_scaled(sysn, z)
        assert abs(scaled - dtilde) <= 1e-9 * max(1.0, abs(dtilde))


def test_recurrence_equals_enumeration():
    rng = random.Random(11)
    for _ in range(40):
        sysn = _random_system(rng, rng.randint(2, 7))
        z = _random_z(rng)
        a = complex(closed_form_field(sysn, z)[0])
        b = recurrence_form(sysn, z)
        assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_closed_form_vectorized_matches_scalar():
    sys3 = system_of(0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0])
    zs = np.array([[0.5 - 0.1j, 1.0 - 0.05j], [1.5 - 0.2j, 0.3 - 0.01j]])
    field, mags = closed_form_field(sys3, zs)
    assert field.shape == zs.shape == mags.shape
    for idx in np.ndindex(zs.shape):
        one, _ = closed_form_field(sys3, complex(zs[idx]))
        assert complex(one) == pytest.approx(complex(field[idx]), rel=1e-14)


def test_max_term_magnitude_bounds_value():
    sys3 = system_of(0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0])
    z = 1.0 - 0.2j
    value, biggest = closed_form_field(sys3, z)
    n_terms = len(enumerate_index_sets(3)) + 1
    assert abs(complex(value)) <= n_terms * float(biggest)
    assert float(biggest) >= 1.0


def test_boundary_matrix_shape_and_det_nonzero():
    sys4 = system_of(0.1, [0.0, 2.0, 5.0, 6.0], [2.0, 0.5, 0.5, 2.0])
    mat = assemble_boundary_matrix(sys4, 0.7 - 0.1j)
    assert mat.shape == (8, 8)
    assert np.linalg.det(mat) != 0


def test_closed_form_value_reconstructs_determinant():
    sys2 = system_of(0.1, [0.0, 3.0], [1.0, 1.5], [2.0, -1.0])
    z = 0.6 - 0.08j
    dv = closed_form(sys2, z)
    reconstructed = dv.value * cmath.exp(complex(dv.scale_log, dv.scale_arg))
    det = direct_determinant(sys2, z).value
    assert reconstructed == pytest.approx(det, rel=1e-9)


def test_truncated_form_approximates_closed_form_small_h():
    sys2 = system_of(0.01, [0.0, 2.0], [1.0, 1.0])
    z = 1.0 - 0.005j
    full = complex(closed_form_field(sys2, z)[0])
    trunc = complex(truncated_form(sys2, z))
    # truncation error is O(h**beta) relative to the oscillatory term
    assert abs(full - trunc) < 1e-3 * abs(full)


def test_overflow_guard_trips_deep_in_lower_half_plane():
    sys2 = system_of(1e-3, [0.0, 6.0], [2.0, 2.0])
    with pytest.raises(OverflowGuardError):
        closed_form_field(sys2, 1.0 - 0.5j)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5),
       st.floats(0.2, 2.0), st.floats(-0.4, -0.01),
       st.randoms(use_true_random=False))
def test_conjugate_symmetry_property(n, re, im, rng):
    """For real couplings, Dtilde(-conj z) = conj(Dtilde(z))."""
    sysn = _random_system(rng, n)
    z = complex(re, im)
    left = complex(closed_form_field(sysn, -z.conjugate())[0])
    right = complex(closed_form_field(sysn, z)[0]).conjugate()
    assert left == pytest.approx(right, rel=1e-12, abs=1e-12)
