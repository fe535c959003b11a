"""Physical configuration of the delta-barrier system and shared numeric conventions.

A system is a semiclassical parameter h together with N barriers, the j-th
sitting at position x_j with coupling c_j * h**(1 + beta_j).  Everything
downstream (polygon, determinant, solver) consumes the immutable
:class:`DeltaSystem` defined here, plus the basic building blocks
omega**lam = exp(i*z*lam/h) and the reflection/transmission factors
R_j, T_j.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field


#: Exponent magnitude beyond which exp() is reported instead of evaluated.
EXP_GUARD = 700.0

#: Reject R_j/T_j when the shared denominator is smaller than this.
POLE_TOL = 1e-300


class OverflowGuardError(ArithmeticError):
    """exp() argument left the double range; value would be inf or 0."""


class PoleError(ZeroDivisionError):
    """z hit a pole of R_j/T_j (2iz == c_j h**beta_j)."""


@dataclass(frozen=True)
class DeltaBarrier:
    """One barrier: position x, strength exponent beta > 0, coupling c != 0."""

    x: float
    beta: float
    c: float


@dataclass(frozen=True)
class Window:
    """Rectangular search region in the complex plane, Re > 0."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("window bounds must satisfy re_min < re_max, im_min < im_max")
        if self.re_min <= 0:
            raise ValueError("window must lie in Re z > 0")

    def contains(self, z: complex) -> bool:
        return (self.re_min <= z.real <= self.re_max
                and self.im_min <= z.imag <= self.im_max)

    def dilated(self, factor: float) -> "Window":
        """Window grown by `factor` of its half-extent about its center."""
        cr = 0.5 * (self.re_min + self.re_max)
        ci = 0.5 * (self.im_min + self.im_max)
        hr = 0.5 * (self.re_max - self.re_min) * (1.0 + factor)
        hi = 0.5 * (self.im_max - self.im_min) * (1.0 + factor)
        return Window(max(cr - hr, 1e-12), cr + hr, ci - hi, ci + hi)


@dataclass(frozen=True)
class DeltaSystem:
    """h plus the ordered barrier list.  Validate with :func:`validate`."""

    h: float
    deltas: tuple[DeltaBarrier, ...]

    def __post_init__(self):
        object.__setattr__(self, "deltas", tuple(self.deltas))

    @property
    def n(self) -> int:
        return len(self.deltas)

    def coupling(self, j: int) -> float:
        """c_j * h**beta_j for 1-based barrier index j."""
        d = self.deltas[j - 1]
        return d.c * self.h ** d.beta

    def position(self, j: int) -> float:
        return self.deltas[j - 1].x


def system_of(h: float, xs, betas, cs=None) -> DeltaSystem:
    """Convenience constructor from parallel parameter sequences."""
    if cs is None:
        cs = [1.0] * len(xs)
    return DeltaSystem(h, tuple(DeltaBarrier(float(x), float(b), float(c))
                                for x, b, c in zip(xs, betas, cs, strict=True)))


def validate(system: DeltaSystem) -> list[str]:
    """Return every violated invariant as a message; empty list means valid.

    Never raises on finite-float input.
    """
    issues = []
    if not (isinstance(system.h, (int, float)) and math.isfinite(system.h) and system.h > 0):
        issues.append("h-nonpositive: h must be a positive finite real")
    if system.n < 1:
        issues.append("no-deltas: at least one delta barrier is required")
    for i, d in enumerate(system.deltas, start=1):
        if not all(math.isfinite(v) for v in (d.x, d.beta, d.c)):
            issues.append(f"nonfinite-parameter: delta {i} has a non-finite field")
            continue
        if d.beta <= 0:
            issues.append(f"beta-nonpositive: delta {i} has beta = {d.beta}")
        if d.c == 0:
            issues.append(f"c-zero: delta {i} has zero coupling")
    for i in range(1, system.n):
        if not (system.deltas[i - 1].x < system.deltas[i].x):
            issues.append(
                f"positions-not-increasing: x_{i} = {system.deltas[i - 1].x} "
                f"!< x_{i + 1} = {system.deltas[i].x}")
    return issues


def omega_pow(system: DeltaSystem, z: complex, lam: float) -> complex:
    """omega**lam = exp(i*z*lam/h).

    |result| = exp(-lam * Im z / h).  Raises OverflowGuardError when the
    magnitude exponent leaves [-EXP_GUARD, EXP_GUARD].
    """
    arg = 1j * z * lam / system.h
    if abs(arg.real) > EXP_GUARD:
        raise OverflowGuardError(
            f"exp argument {arg.real:.3g} exceeds guard {EXP_GUARD}")
    return cmath.exp(arg)


def _rt_denominator(system: DeltaSystem, j: int, z: complex) -> complex:
    den = 2j * z - system.coupling(j)
    if abs(den) < POLE_TOL:
        raise PoleError(f"z = {z} is at the pole of barrier {j}")
    return den


def reflection_r(system: DeltaSystem, j: int, z: complex) -> complex:
    """R_j = c_j h**beta_j / (2iz - c_j h**beta_j)."""
    return system.coupling(j) / _rt_denominator(system, j, z)


def transmission_t(system: DeltaSystem, j: int, z: complex) -> complex:
    """T_j = 2iz / (2iz - c_j h**beta_j); satisfies T_j - R_j = 1."""
    return 2j * z / _rt_denominator(system, j, z)


# --- JSON configuration ------------------------------------------------

_TOP_KEYS = {"h", "deltas", "window", "grid"}
_DELTA_KEYS = {"x", "beta", "c"}
_WINDOW_KEYS = {"re_min", "re_max", "im_min", "im_max"}
_GRID_KEYS = {"nx", "ny"}


@dataclass
class Config:
    """Parsed CLI configuration: the system plus optional window/grid."""

    system: DeltaSystem
    window: Window | None = None
    nx: int | None = None
    ny: int | None = None
    notices: list[str] = field(default_factory=list)


class ConfigError(ValueError):
    """Malformed configuration document."""


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} in {where}")


def parse_config(doc: dict) -> Config:
    """Build a Config from a decoded JSON document.

    Unknown keys are rejected.  Deltas may arrive unsorted; they are sorted
    by position and a notice is recorded.
    """
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    _check_keys(doc, _TOP_KEYS, "configuration")
    if "h" not in doc or "deltas" not in doc:
        raise ConfigError("configuration requires 'h' and 'deltas'")
    notices = []

    raw = doc["deltas"]
    if not isinstance(raw, list) or not raw:
        raise ConfigError("'deltas' must be a nonempty array")
    deltas = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ConfigError(f"delta #{i} must be an object")
        _check_keys(entry, _DELTA_KEYS, f"delta #{i}")
        try:
            deltas.append(DeltaBarrier(float(entry["x"]), float(entry["beta"]),
                                       float(entry["c"])))
        except (KeyError, TypeError) as exc:
            raise ConfigError(f"delta #{i} is incomplete or non-numeric") from exc
    if any(deltas[i].x > deltas[i + 1].x for i in range(len(deltas) - 1)):
        deltas.sort(key=lambda d: d.x)
        notices.append("deltas were given unsorted; sorted by position")

    system = DeltaSystem(float(doc["h"]), tuple(deltas))
    issues = validate(system)
    if issues:
        raise ConfigError("invalid system: " + "; ".join(issues))

    window = None
    if "window" in doc:
        w = doc["window"]
        _check_keys(w, _WINDOW_KEYS, "window")
        try:
            window = Window(float(w["re_min"]), float(w["re_max"]),
                            float(w["im_min"]), float(w["im_max"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad window: {exc}") from exc

    nx = ny = None
    if "grid" in doc:
        g = doc["grid"]
        _check_keys(g, _GRID_KEYS, "grid")
        try:
            nx, ny = int(g["nx"]), int(g["ny"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad grid: {exc}") from exc
        if nx < 16 or ny < 16:
            raise ConfigError("grid sizes must be >= 16")

    return Config(system=system, window=window, nx=nx, ny=ny, notices=notices)


def default_window(system: DeltaSystem) -> Window:
    """Fallback search window: Re in [0.1, 2], Im depth scaled to the slopes."""
    from .polygon import build_polygon

    depth = 3.0 * system.h
    if system.n >= 2:
        gmax = max(float(s.gamma) for s in build_polygon(system).slopes)
        depth *= max(1.0, gmax * math.log(1.0 / system.h) / 3.0)
    return Window(0.1, 2.0, -depth, 0.0)
