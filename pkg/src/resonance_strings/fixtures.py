"""Named benchmark configurations with their known polygon-level answers.

Each fixture bundles a concrete system with the exact expected slope set,
dominant pair, string count, and genericity verdict, so both the test suite
and the CLI can exercise the full pipeline against frozen ground truth.
Slopes are exact Fractions; comparisons need no tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

from .model import DeltaSystem, system_of


@dataclass(frozen=True)
class Fixture:
    name: str
    system: DeltaSystem
    expected_slopes: tuple[F, ...] | None  # ordered Gamma; None if non-generic
    expected_dominant: tuple[int, int] | None
    expected_count: int | None
    generic: bool
    note: str = ""


def _fx(name, h, xs, betas, cs=None, slopes=None, dominant=None,
        count=None, generic=True, note=""):
    return Fixture(name, system_of(h, xs, betas, cs),
                   tuple(slopes) if slopes is not None else None,
                   dominant, count, generic, note)


def equal_strength_system(n: int, h: float = 0.1) -> DeltaSystem:
    """N equal-strength barriers (beta_j all 1) at generic positions.

    The dominant pair is always (1, N) and there is exactly one string.
    """
    xs = [float(sum(range(1, j + 1))) for j in range(n)]  # 0, 1, 3, 6, ...
    return system_of(h, xs, [1.0] * n)


def cascade_system(n: int, h: float = 0.1) -> DeltaSystem:
    """beta_j = 10**(-j) at unit spacing: attains the maximal N - 1 strings."""
    return system_of(h, [float(j) for j in range(n)],
                     [10.0 ** (-(j + 1)) for j in range(n)])


def all_fixtures() -> dict[str, Fixture]:
    fx: list[Fixture] = []

    for n in (3, 4, 5):
        sys_eq = equal_strength_system(n)
        ln = sys_eq.deltas[-1].x - sys_eq.deltas[0].x
        fx.append(Fixture(f"equal-strength-n{n}", sys_eq,
                          (F(2) / F(2 * ln),), (1, n), 1, True,
                          "equal beta: single string, outermost pair dominates"))

    for n in range(3, 9):
        sys_c = cascade_system(n)
        fx.append(Fixture(f"cascade-n{n}", sys_c, None, (n - 1, n),
                          n - 1, True,
                          "beta_j = 10**-j, unit spacing: maximal string count"))

    fx.append(_fx("three-barrier", 0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0],
                  slopes=[F(1, 8), F(3, 8)], dominant=(1, 2), count=2,
                  note="two strings: dominant (1,2) plus flat (2,3)"))

    fx.append(_fx("four-a", 0.1, [0.0, 2.0, 5.0, 6.0], [2.0, 2.0, 2.0, 2.0],
                  slopes=[F(1, 3)], dominant=(1, 4), count=1,
                  note="equal beta: interior barriers overshadowed"))
    fx.append(_fx("four-b", 0.1, [0.0, 2.0, 5.0, 6.0], [2.0, 2.0, 0.5, 2.0],
                  slopes=[F(1, 4), F(3, 4)], dominant=(1, 3), count=2,
                  note="strong third barrier pairs with the far first"))
    fx.append(_fx("four-c", 0.1, [0.0, 2.0, 5.0, 6.0], [2.0, 0.5, 0.5, 2.0],
                  slopes=[F(1, 6), F(3, 8), F(3, 4)], dominant=(2, 3), count=3,
                  note="central dominant pair forces three strings"))
    fx.append(_fx("four-d", 0.1, [0.0, 3.0, 4.0, 6.0], [0.5, 0.5, 2.0, 3.0],
                  slopes=[F(1, 6), F(5, 12)], dominant=(1, 2), count=2,
                  note="strict inequality case: 2 strings < bound 3"))
    fx.append(_fx("four-e", 0.1, [0.0, 3.0, 5.0, 6.0], [0.5, 0.5, 2.0, 3.0],
                  slopes=[F(1, 6), F(3, 8), F(1, 2)], dominant=(1, 2), count=3,
                  note="small shift of the third barrier adds a string"))

    fx.append(_fx("dense-flat", 0.1, [0.0, 1.0, 3.0, 6.0],
                  [0.05, 0.05, 2.0, 6.0],
                  slopes=[F(0.05), (F(2.0) - F(0.05)) / 4, F(2, 3)],
                  dominant=(1, 2),
                  count=3,
                  note="strong far barriers: lower strings denser than dominant"))
    fx.append(_fx("symmetric-tie", 0.1, [1.0, 2.0, 5.0, 6.0],
                  [2.0, 0.5, 0.5, 2.0],
                  slopes=None, dominant=(2, 3), count=None, generic=False,
                  note="non-generic: outer flat slopes coincide"))
    fx.append(_fx("near-crossing", 0.1, [0.0, 2.0, 5.0, 6.0],
                  [1.5, 0.5, 0.5, 2.0],
                  slopes=[F(1, 6), F(1, 4), F(3, 4)], dominant=(2, 3), count=3,
                  note="close slopes: strings nearly intersect in the window"))
    for h in (0.1, 0.01):
        fx.append(_fx(f"mixed-couplings-h{h}", h, [0.0, 2.0, 5.0, 6.0],
                      [2.0, 0.5, 0.5, 2.0], cs=[10.0, 1.0, -5.0, 1.0],
                      slopes=[F(1, 6), F(3, 8), F(3, 4)], dominant=(2, 3),
                      count=3,
                      note="couplings far from 1: accuracy improves as h drops"))

    return {f.name: f for f in fx}


def get_fixture(name: str) -> Fixture:
    table = all_fixtures()
    if name not in table:
        known = ", ".join(sorted(table))
        raise KeyError(f"unknown fixture {name!r}; known: {known}")
    return table[name]
