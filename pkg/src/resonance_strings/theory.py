"""Predicted resonance strings: discrete points and Im-vs-Re curves.

Each Newton-polygon slope gamma owns one string.  The dominant string sits on
a logarithmic curve in Re z; every other string is flat up to o(h).  For a
flat string the signed strength difference beta_far - beta_near (orientation
from the polygon: `far` is the barrier farther from the dominant pair) and
the coupling ratio c_far / c_near set the vertical offset.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .model import DeltaSystem, Window
from .polygon import NewtonPolygon, build_polygon


@dataclass(frozen=True)
class ResonanceString:
    id: str
    gamma: float
    kind: str  # "dominant" | "flat"
    pair: tuple[int, int]
    near: int
    far: int
    length: float        # x_far-vs-near interval length, always > 0
    spacing: float       # pi h / length: Re gap between consecutive points
    beta_sum: float      # dominant: beta_J + beta_K
    beta_diff: float     # flat: beta_far - beta_near (signed)
    c_near: float
    c_far: float


@dataclass(frozen=True)
class PredictedPoint:
    m: int
    z: complex
    string_id: str


def strings_for(system: DeltaSystem, polygon: NewtonPolygon | None = None):
    """One ResonanceString per polygon slope; raises NonGenericError via the
    partition check when slopes are not unique."""
    from .polygon import interval_partition

    if polygon is None:
        polygon = build_polygon(system)
    interval_partition(polygon)  # genericity gate
    strings = []
    for idx, slope in enumerate(polygon.slopes):
        d_near = system.deltas[slope.near - 1]
        d_far = system.deltas[slope.far - 1]
        length = abs(d_far.x - d_near.x)
        strings.append(ResonanceString(
            id=f"s{idx}",
            gamma=float(slope.gamma),
            kind=slope.kind,
            pair=slope.pair,
            near=slope.near,
            far=slope.far,
            length=length,
            spacing=math.pi * system.h / length,
            beta_sum=d_near.beta + d_far.beta,
            beta_diff=d_far.beta - d_near.beta,
            c_near=d_near.c,
            c_far=d_far.c,
        ))
    return strings


def predict_points(string: ResonanceString, system: DeltaSystem,
                   window: Window) -> list[PredictedPoint]:
    """All predicted points z_m with pi*h*m/length inside the Re window.

    Dominant: z_m = pi h m/l - i gamma h log(1/h)
                    + (i h / 2l) Log(-c_j c_k l^2 / (4 pi^2 h^2 m^2)).
    Flat:     z_m = pi h m/l - i gamma h log(1/h)
                    + (i h / 2l) Log(-c_far / c_near).
    Principal branch throughout; the o(h) remainder is dropped.
    """
    h, l = system.h, string.length
    log_h_term = -1j * string.gamma * h * math.log(1.0 / h)
    m_lo = math.ceil(window.re_min * l / (math.pi * h))
    m_hi = math.floor(window.re_max * l / (math.pi * h))
    points = []
    for m in range(max(m_lo, 1), m_hi + 1):
        base = math.pi * h * m / l
        if string.kind == "dominant":
            arg = -string.c_near * string.c_far * l * l / (4.0 * math.pi ** 2 * h * h * m * m)
        else:
            arg = -string.c_far / string.c_near
        z = base + log_h_term + (1j * h / (2.0 * l)) * cmath.log(arg)
        points.append(PredictedPoint(m=m, z=z, string_id=string.id))
    return points


def theory_curve(string: ResonanceString, system: DeltaSystem, re: float) -> float:
    """Im z on the string's curve at the given Re z.

    Dominant: ((b_j + b_k)/2l) h log h + (h/2l) log(|c_j c_k| / (4 re^2)),
    logarithmic in re.  Flat: constant
    ((b_far - b_near)/2l) h log h + (h/2l) log|c_far / c_near|.
    """
    if re <= 0:
        raise ValueError("theory curve defined for Re z > 0 only")
    h, l = system.h, string.length
    if string.kind == "dominant":
        return (string.beta_sum / (2.0 * l)) * h * math.log(h) \
            + (h / (2.0 * l)) * math.log(abs(string.c_near * string.c_far) / (4.0 * re * re))
    return (string.beta_diff / (2.0 * l)) * h * math.log(h) \
        + (h / (2.0 * l)) * math.log(abs(string.c_far / string.c_near))
