"""Evaluators for the resonance condition D_N(z) = 0.

Three independent routes to the same quantity:

* ``direct_determinant`` -- LU determinant of the 2N x 2N boundary-condition
  matrix (continuity and jump rows for each barrier).  Slow and exposed to
  huge entry magnitudes, but assembled straight from the linear system, so it
  serves as the oracle.
* ``closed_form`` -- the explicit expansion of the scaled determinant
  Dtilde_N = D_N / c over interleaved index tuples; this is what the solver
  evaluates on grids.
* ``recurrence_form`` -- the full-order recurrence
  Dtilde_N = Dtilde_{N-1} - sum_m Rterm(N-m, N) * Dtilde_{N-m-1},
  used in tests as a cheap third cross-check.

All closed-form evaluators only ever use omega to nonnegative powers
omega**(2(x_k - x_j)), which keeps magnitudes moderate in the lower half
plane; the removed factor c is carried in log form.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .model import EXP_GUARD, DeltaSystem, OverflowGuardError, PoleError

#: Explicit tuple enumeration is refused beyond this N (combinatorial growth).
MAX_ENUMERATION_N = 12


@dataclass(frozen=True)
class DeterminantValue:
    """value * exp(scale_log + i*scale_arg) is the represented number."""

    value: complex
    scale_log: float = 0.0
    scale_arg: float = 0.0


def enumerate_index_sets(n_deltas: int):
    """All interleaved pair tuples ((j1,k1),...,(jn,kn)), j1<k1<j2<...<=N.

    Any even-sized index subset admits exactly one interleaved pairing
    (consecutive elements), so this is a subset enumeration.
    """
    if n_deltas < 2:
        raise ValueError("index sets require N >= 2")
    if n_deltas > MAX_ENUMERATION_N:
        raise ValueError(f"enumeration limited to N <= {MAX_ENUMERATION_N}")
    tuples = []
    for n in range(1, n_deltas // 2 + 1):
        for subset in combinations(range(1, n_deltas + 1), 2 * n):
            tuples.append(tuple((subset[2 * i], subset[2 * i + 1])
                                for i in range(n)))
    return tuples


def _rt_arrays(system: DeltaSystem, z):
    """R_j and (T_j + R_j) for all j, vectorized over z."""
    z = np.asarray(z, dtype=complex)
    rs, trs = [], []
    for j in range(1, system.n + 1):
        q = system.coupling(j)
        den = 2j * z - q
        if np.any(np.abs(den) < 1e-300):
            raise PoleError(f"z hit the pole of barrier {j}")
        rs.append(q / den)
        trs.append((2j * z + q) / den)
    return rs, trs


def _omega_block(system: DeltaSystem, z, lam: float):
    """omega**lam with the overflow guard, vectorized."""
    z = np.asarray(z, dtype=complex)
    arg = 1j * z * (lam / system.h)
    if np.any(np.abs(arg.real) > EXP_GUARD):
        raise OverflowGuardError("omega power exceeds the exponential guard")
    return np.exp(arg)


def _pair_factor(system: DeltaSystem, rs, trs, z, j: int, k: int):
    """Rterm(j, k) = R_j (T_{j+1}+R_{j+1}) ... (T_{k-1}+R_{k-1}) R_k omega**(2(x_k-x_j))."""
    term = rs[j - 1] * rs[k - 1]
    for m in range(j + 1, k):
        term = term * trs[m - 1]
    lam = 2.0 * (system.position(k) - system.position(j))
    return term * _omega_block(system, z, lam)


def closed_form_field(system: DeltaSystem, z):
    """(Dtilde_N, max term magnitude), vectorized over an array of z.

    The magnitude accompanies the value so residuals can be reported relative
    to the largest summand instead of the (often huge) raw scale.
    """
    z = np.asarray(z, dtype=complex)
    rs, trs = _rt_arrays(system, z)
    total = np.ones_like(z)
    biggest = np.ones(z.shape, dtype=float)
    if system.n >= 2:
        factors = {}
        for j in range(1, system.n + 1):
            for k in range(j + 1, system.n + 1):
                factors[(j, k)] = _pair_factor(system, rs, trs, z, j, k)
        for tup in enumerate_index_sets(system.n):
            term = factors[tup[0]]
            for pr in tup[1:]:
                term = term * factors[pr]
            if len(tup) % 2 == 1:
                term = -term
            total = total + term
            biggest = np.maximum(biggest, np.abs(term))
    return total, biggest


def log_scale_c(system: DeltaSystem, z: complex) -> complex:
    """log of c = -prod_j omega**(-2 x_j) * (2iz - c_j h**beta_j).

    This is the factor with D_N = c * Dtilde_N; the boundary-matrix row
    reduction pulls each (2iz - c_j h**beta_j) out as a multiplier.  Returned
    as log|c| + i*arg (arg not reduced mod 2pi); only differences of logs are
    ever exponentiated.
    """
    total = complex(0.0, math.pi)  # the leading minus sign
    for j in range(1, system.n + 1):
        total += -2.0 * system.position(j) * (1j * z / system.h)
        total += cmath.log(2j * z - system.coupling(j))
    return total


def closed_form(system: DeltaSystem, z: complex) -> DeterminantValue:
    """Dtilde_N at a single z, with the scale c recorded in log form so that
    D_N = value * exp(scale_log + i*scale_arg)."""
    value, _ = closed_form_field(system, z)
    logc = log_scale_c(system, z)
    return DeterminantValue(complex(value), logc.real, logc.imag)


def assemble_boundary_matrix(system: DeltaSystem, z: complex) -> np.ndarray:
    """The raw 2N x 2N coefficient matrix of the continuity/jump system.

    Unknown ordering: v_0^-, v_1^-, v_1^+, ..., v_{N-1}^-, v_{N-1}^+, v_N^+
    (the outgoing condition removes v_0^+ and v_N^-).  Row 2j-2 is continuity
    at x_j, row 2j-1 the jump condition.
    """
    n = system.n
    if n == 0:
        raise ValueError("matrix assembly requires N >= 1")
    size = 2 * n
    mat = np.zeros((size, size), dtype=complex)

    def col_minus(j):  # column of v_j^-, j = 0..N-1
        return 0 if j == 0 else 2 * j - 1

    def col_plus(j):  # column of v_j^+, j = 1..N
        return 2 * j if j < n else 2 * n - 1

    for j in range(1, n + 1):
        w = _omega_block(system, z, -2.0 * system.position(j))
        q = system.coupling(j)
        rc, rj = 2 * j - 2, 2 * j - 1
        # left-interval coefficients (v_{j-1}^- always; v_{j-1}^+ absent at j=1)
        mat[rc, col_minus(j - 1)] += w
        mat[rj, col_minus(j - 1)] += -1j * z * w
        if j > 1:
            mat[rc, col_plus(j - 1)] += 1.0
            mat[rj, col_plus(j - 1)] += 1j * z
        # right-interval coefficients (v_j^- absent at j=N)
        if j < n:
            mat[rc, col_minus(j)] += -w
            mat[rj, col_minus(j)] += (1j * z + q) * w
        mat[rc, col_plus(j)] += -1.0
        mat[rj, col_plus(j)] += -1j * z + q
    return mat


def direct_determinant(system: DeltaSystem, z: complex) -> DeterminantValue:
    """LU determinant of the boundary matrix; no scaling applied."""
    mat = assemble_boundary_matrix(system, z)
    return DeterminantValue(complex(np.linalg.det(mat)))


def direct_scaled(system: DeltaSystem, z: complex) -> complex:
    """D_N / c computed in log space (stable when entries span many decades)."""
    mat = assemble_boundary_matrix(system, z)
    sign, logabs = np.linalg.slogdet(mat)
    if sign == 0:
        return 0.0 + 0.0j
    logc = log_scale_c(system, z)
    return complex(sign * np.exp(logabs - logc.real) * cmath.exp(-1j * logc.imag))


def recurrence_form(system: DeltaSystem, z: complex) -> complex:
    """Dtilde_N via the proof recurrence; test-only cross-check."""
    z_arr = np.asarray(z, dtype=complex)
    rs, trs = _rt_arrays(system, z_arr)
    values = [np.ones_like(z_arr), np.ones_like(z_arr)]  # Dtilde_0, Dtilde_1
    for n in range(2, system.n + 1):
        acc = values[n - 1].copy()
        for m in range(1, n):
            acc = acc - _pair_factor(system, rs, trs, z_arr, n - m, n) * values[n - m - 1]
        values.append(acc)
    return complex(values[system.n])


def truncated_form(system: DeltaSystem, z):
    """Leading-order truncation 1 + sum_{j<k} (c_j c_k / 4z^2) h**(b_j+b_k) omega**(2(x_k-x_j)).

    Diagnostic / predictor seeding only; never the root-finding target.
    """
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) < 1e-12):
        raise PoleError("truncated form undefined at z near 0")
    total = np.ones_like(z)
    for j in range(1, system.n + 1):
        for k in range(j + 1, system.n + 1):
            dj, dk = system.deltas[j - 1], system.deltas[k - 1]
            coeff = (dj.c * dk.c / (4.0 * z * z)) * system.h ** (dj.beta + dk.beta)
            lam = 2.0 * (dk.x - dj.x)
            total = total + coeff * _omega_block(system, z, lam)
    if total.shape == ():
        return complex(total)
    return total
