"""Newton polygon of the barrier configuration.

The point set is {(2(x_k - x_j), beta_j + beta_k) : j < k} together with the
origin.  The finite slopes of its lower convex hull form the set Gamma; the
leftmost slope belongs to the dominant pair (the argmin of
(beta_j + beta_k) / (2(x_k - x_j))), and every further slope is a
difference quotient |beta_k - beta_j| / (2(x_k - x_j)) of two barriers that
extend the previous hull interval by one endpoint.

All hull geometry is done in exact rational arithmetic (every float is an
exact dyadic rational), so slope equalities -- the genericity test -- are
decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import DeltaSystem


@dataclass(frozen=True)
class PairPoint:
    """One polygon point with the barrier pair(s) that produced it."""

    lam: Fraction
    nu: Fraction
    pairs: tuple[tuple[int, int], ...]  # empty for the origin marker

    @property
    def is_origin(self) -> bool:
        return not self.pairs

    @property
    def pair(self) -> tuple[int, int]:
        return self.pairs[0]


@dataclass(frozen=True)
class Slope:
    """One finite hull slope: its value, kind, and attributed barrier pair.

    `pair` is sorted ascending.  For flat slopes `near`/`far` record the
    orientation: `near` is the index taken from the inner (shorter) hull
    interval, `far` from the outer one, so beta_far - beta_near > 0 for
    generic systems and the signed curve formulas read off directly.
    """

    gamma: Fraction
    kind: str  # "dominant" | "flat"
    pair: tuple[int, int]
    segment: tuple[PairPoint, PairPoint]
    near: int
    far: int


@dataclass(frozen=True)
class NewtonPolygon:
    points: tuple[PairPoint, ...]
    hull: tuple[PairPoint, ...]
    slopes: tuple[Slope, ...]
    system: DeltaSystem


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    violations: tuple[tuple[PairPoint, PairPoint, PairPoint], ...]
    messages: tuple[str, ...]


class ConfigurationError(ValueError):
    pass


class NonGenericError(ValueError):
    """Raised by operations that require unique hull slopes."""

    def __init__(self, report: GenericityReport):
        super().__init__("; ".join(report.messages) or "non-generic configuration")
        self.report = report


def _exact(value: float) -> Fraction:
    return Fraction(value)


def pair_points(system: DeltaSystem) -> list[PairPoint]:
    """All polygon points, origin first; coincident pairs share one point."""
    if system.n < 2:
        raise ConfigurationError("Newton polygon requires at least two deltas")
    by_coord: dict[tuple[Fraction, Fraction], list[tuple[int, int]]] = {}
    xs = [_exact(d.x) for d in system.deltas]
    bs = [_exact(d.beta) for d in system.deltas]
    for j in range(1, system.n + 1):
        for k in range(j + 1, system.n + 1):
            lam = 2 * (xs[k - 1] - xs[j - 1])
            nu = bs[j - 1] + bs[k - 1]
            by_coord.setdefault((lam, nu), []).append((j, k))
    points = [PairPoint(Fraction(0), Fraction(0), ())]
    for (lam, nu), prs in sorted(by_coord.items()):
        points.append(PairPoint(lam, nu, tuple(prs)))
    return points


def _cross(o: PairPoint, a: PairPoint, b: PairPoint) -> Fraction:
    return ((a.lam - o.lam) * (b.nu - o.nu)
            - (a.nu - o.nu) * (b.lam - o.lam))


def _lower_hull(points: list[PairPoint]) -> list[PairPoint]:
    """Monotone-chain lower hull; collinear interior points are dropped."""
    best: dict[Fraction, PairPoint] = {}
    for p in points:
        q = best.get(p.lam)
        if q is None or p.nu < q.nu:
            best[p.lam] = p
    ordered = [best[lam] for lam in sorted(best)]
    hull: list[PairPoint] = []
    for p in ordered:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    return hull


def _flat_pair(inner: PairPoint, outer: PairPoint) -> tuple[int, int] | None:
    """Barrier pair attributed to the hull slope between two vertices.

    Consecutive hull vertices correspond to nested intervals sharing one
    endpoint; the slope belongs to the two indices not in common.  Returns
    (near, far) where `near` comes from the inner (shorter) interval.
    """
    for ip in inner.pairs:
        for op in outer.pairs:
            shared = set(ip) & set(op)
            if len(shared) == 1:
                near = next(i for i in ip if i not in shared)
                far = next(i for i in op if i not in shared)
                return near, far
    return None


def build_polygon(system: DeltaSystem) -> NewtonPolygon:
    """Construct the polygon, its lower hull, and the attributed slope set."""
    points = pair_points(system)
    hull = _lower_hull(points)
    assert hull[0].is_origin, "origin must open the lower hull"

    slopes: list[Slope] = []
    for a, b in zip(hull, hull[1:]):
        gamma = (b.nu - a.nu) / (b.lam - a.lam)
        if a.is_origin:
            j, k = b.pair
            slopes.append(Slope(gamma, "dominant", (j, k), (a, b), j, k))
        else:
            pr = _flat_pair(a, b)
            if pr is None:
                # Non-generic hulls can jump over a collinear on-edge point
                # (e.g. mirror-symmetric systems); bridge through it so the
                # slope still gets a representative pair.
                for p in points:
                    if (not p.is_origin and a.lam < p.lam < b.lam
                            and _cross(a, p, b) == 0):
                        pr = _flat_pair(a, p)
                        if pr is not None:
                            break
            if pr is None:
                raise ConfigurationError(
                    f"hull vertices {a.pairs} and {b.pairs} share no single index; "
                    "nested-interval structure violated")
            near, far = pr
            slopes.append(Slope(gamma, "flat", tuple(sorted(pr)), (a, b), near, far))
    assert all(s1.gamma < s2.gamma for s1, s2 in zip(slopes, slopes[1:])), \
        "hull slopes must strictly increase"
    return NewtonPolygon(tuple(points), tuple(hull), tuple(slopes), system)


def slope_set(polygon: NewtonPolygon) -> tuple[Slope, ...]:
    """Gamma as an ordered tuple of slopes (strictly increasing)."""
    return polygon.slopes


def dominant_pair(system: DeltaSystem):
    """(J, K, gamma_JK); ties are returned as a list of pairs.

    Returns (pairs, gamma) where pairs has one element for generic systems.
    """
    if system.n < 2:
        raise ConfigurationError("dominant pair requires at least two deltas")
    best_gamma = None
    best_pairs: list[tuple[int, int]] = []
    xs = [_exact(d.x) for d in system.deltas]
    bs = [_exact(d.beta) for d in system.deltas]
    for j in range(1, system.n + 1):
        for k in range(j + 1, system.n + 1):
            gamma = (bs[j - 1] + bs[k - 1]) / (2 * (xs[k - 1] - xs[j - 1]))
            if best_gamma is None or gamma < best_gamma:
                best_gamma, best_pairs = gamma, [(j, k)]
            elif gamma == best_gamma:
                best_pairs.append((j, k))
    return best_pairs, best_gamma


def check_genericity(system: DeltaSystem) -> GenericityReport:
    """Assumption check: no three polygon points collinear on the hull boundary.

    Violations are triples (left vertex, offending point, right vertex) where
    the middle point lies exactly on a hull edge, plus coincident pair points
    that sit on the hull, plus dominant-pair ties.
    """
    if system.n < 2:
        return GenericityReport(True, (), ())
    points = pair_points(system)
    hull = _lower_hull(points)
    hull_coords = {(p.lam, p.nu) for p in hull}
    violations: list[tuple[PairPoint, PairPoint, PairPoint]] = []
    messages: list[str] = []

    def slope_label(a: PairPoint, b: PairPoint) -> str:
        if a.is_origin:
            j, k = b.pair
            return f"gamma_{j}{k}"
        pr = _flat_pair(a, b)
        if pr is None:
            return f"slope {a.pairs}->{b.pairs}"
        lo, hi = sorted(pr)
        return f"gammatilde_{lo}{hi}"

    for a, b in zip(hull, hull[1:]):
        for p in points:
            if p is a or p is b or p.is_origin:
                continue
            if not (a.lam < p.lam < b.lam):
                continue
            if _cross(a, p, b) == 0:
                violations.append((a, p, b))
                left = slope_label(a, p)
                right = slope_label(p, b)
                messages.append(f"{left} = {right}: point {p.pairs} lies on the "
                                "hull edge")

    for p in points:
        if len(p.pairs) > 1 and (p.lam, p.nu) in hull_coords:
            violations.append((p, p, p))
            prs = ", ".join(f"({j},{k})" for j, k in p.pairs)
            messages.append(f"coincident pair points {prs} on the hull")

    pairs, gamma = dominant_pair(system)
    if len(pairs) > 1:
        prs = ", ".join(f"({j},{k})" for j, k in pairs)
        messages.append(f"dominant pair tie at gamma = {gamma}: {prs}")
        origin = points[0]
        coords = {}
        for p in points:
            for pr in p.pairs:
                coords[pr] = p
        a, b = coords[pairs[0]], coords[pairs[1]]
        if (origin, a, b) not in violations:
            violations.append((origin, a, b))

    return GenericityReport(not messages, tuple(violations), tuple(messages))


def interval_partition(polygon: NewtonPolygon):
    """Partition indices 1 = j_1 < ... < j_n = N plus the dominant position I.

    Requires a generic system.  Consecutive hull vertices must share exactly
    one barrier index (nested intervals); each slope then maps to two
    consecutive partition elements.
    """
    report = check_genericity(polygon.system)
    if not report.generic:
        raise NonGenericError(report)
    verts = [p for p in polygon.hull if not p.is_origin]
    indices: set[int] = set()
    chosen: list[tuple[int, int]] = [verts[0].pair]
    indices.update(verts[0].pair)
    for a, b in zip(verts, verts[1:]):
        prev = chosen[-1]
        nxt = None
        for op in b.pairs:
            if len(set(prev) & set(op)) == 1:
                nxt = op
                break
        if nxt is None:
            raise ConfigurationError(
                f"consecutive hull pairs {prev} and {b.pairs} share zero or two "
                "indices; internal consistency violated")
        if not (nxt[0] <= prev[0] and prev[1] <= nxt[1]):
            raise ConfigurationError(
                f"hull intervals {prev} and {nxt} are not nested")
        chosen.append(nxt)
        indices.update(nxt)
    partition = sorted(indices)
    J, K = polygon.slopes[0].pair
    assert partition[0] == 1 and partition[-1] == polygon.system.n, \
        "partition must span [1, N]"
    dominant_position = partition.index(J) + 1  # 1-based position I
    assert partition[dominant_position] == K, "dominant pair must be adjacent"
    return partition, dominant_position


def string_count_bound(system: DeltaSystem) -> tuple[int, int]:
    """(N - 1, N - K + J): both upper bounds on the number of strings."""
    pairs, _ = dominant_pair(system)
    J, K = pairs[0]
    return system.n - 1, system.n - K + J


def slope_margin(polygon: NewtonPolygon, index: int) -> float:
    """Optional diagnostic: half-width of the gamma interval in which the
    slope's two endpoint exponents stay minimal.

    In the (gamma, nu - lambda*gamma) picture every polygon point is a line;
    the margin is the distance from this slope's gamma to the nearest crossing
    with a third point's line, i.e. how far gamma can move before a different
    point's exponent ties the minimum.
    """
    slope = polygon.slopes[index]
    a, b = slope.segment
    gamma0 = slope.gamma
    margin = None
    for p in polygon.points:
        if (p.lam, p.nu) in {(a.lam, a.nu), (b.lam, b.nu)}:
            continue
        for v in (a, b):
            if p.lam == v.lam:
                continue
            crossing = (p.nu - v.nu) / (p.lam - v.lam)
            dist = abs(crossing - gamma0)
            if margin is None or dist < margin:
                margin = dist
    return float(margin) if margin is not None else float("inf")
