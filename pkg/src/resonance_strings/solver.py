"""Numerical resonance location by contour intersection.

Pipeline: sample Dtilde_N on a rectangular grid, trace the zero contours of
its real and imaginary parts separately (marching squares with linear edge
interpolation), drop vertices hugging the window boundary, intersect the two
polyline families, and polish every crossing with Newton iteration on the
closed form.  Accepted roots are sorted canonically (Re, then Im) and matched
to the predicted strings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .determinant import closed_form_field
from .model import DeltaSystem, Window
from .theory import ResonanceString, theory_curve

#: Boundary strip width, in units of h, inside which contour vertices are cut.
BOUNDARY_EPS_FACTOR = 0.03

#: Relative-residual targets: Newton stop and root acceptance.
NEWTON_TOL = 1e-10
ACCEPT_RESIDUAL = 1e-8
NEWTON_MAX_ITER = 25


@dataclass(frozen=True)
class GridField:
    """Complex samples of Dtilde_N on a uniform window grid.

    values[iy, ix] belongs to re_axis[ix] + 1j * im_axis[iy].  Overflowed
    samples (exponential guard) are NaN with overflow[iy, ix] set.
    """

    window: Window
    re_axis: np.ndarray
    im_axis: np.ndarray
    values: np.ndarray
    overflow: np.ndarray

    @property
    def cell_size(self) -> tuple[float, float]:
        return (float(self.re_axis[1] - self.re_axis[0]),
                float(self.im_axis[1] - self.im_axis[0]))


@dataclass(frozen=True)
class PlanarCurveSet:
    """Zero-level polylines of one real field component."""

    polylines: tuple[np.ndarray, ...]  # each (n, 2) array of (re, im)
    part: str  # "real" | "imag"

    def segments(self) -> np.ndarray:
        """All polyline edges as an (n, 4) array (x1, y1, x2, y2)."""
        chunks = [np.hstack([p[:-1], p[1:]]) for p in self.polylines if len(p) >= 2]
        if not chunks:
            return np.empty((0, 4))
        return np.vstack(chunks)


@dataclass(frozen=True)
class Resonance:
    z: complex
    residual: float                 # |Dtilde| / largest summand magnitude
    matched_string: str | None = None
    deviation: float | None = None
    m_estimate: int | None = None


def sample_grid(system: DeltaSystem, window: Window, nx: int, ny: int) -> GridField:
    """Evaluate Dtilde_N at nx * ny uniform grid nodes (deterministic)."""
    if nx < 16 or ny < 16:
        raise ValueError("grid must be at least 16 x 16")
    re_axis = np.linspace(window.re_min, window.re_max, nx)
    im_axis = np.linspace(window.im_min, window.im_max, ny)
    zs = re_axis[None, :] + 1j * im_axis[:, None]
    values, _ = closed_form_field(system, zs)
    overflow = ~np.isfinite(values)
    values = np.where(overflow, np.nan + 0j, values)
    return GridField(window, re_axis, im_axis, values, overflow)


def _edge_point(xa, ya, fa, xb, yb, fb):
    t = fa / (fa - fb)
    return (xa + t * (xb - xa), ya + t * (yb - ya))


def extract_contours(field: GridField, part: str) -> PlanarCurveSet:
    """Marching squares on the sign field of one component.

    Cell corners are the four surrounding grid samples; a crossing vertex is
    placed on each edge whose endpoint signs differ, by linear interpolation.
    Saddle cells (both diagonals sign-alternating) are disambiguated by the
    sign of the cell-center sample, estimated as the corner average.  Exact
    zeros are treated as positive so every vertex is a genuine crossing.
    """
    if part == "real":
        f = np.real(field.values)
    elif part == "imag":
        f = np.imag(field.values)
    else:
        raise ValueError("part must be 'real' or 'imag'")
    xs, ys = field.re_axis, field.im_axis
    pos = (f >= 0) & np.isfinite(f)
    finite = np.isfinite(f)

    # cells whose four corners are finite and not of one sign
    c = (pos[:-1, :-1].astype(np.int8) + pos[:-1, 1:] + pos[1:, :-1] + pos[1:, 1:])
    ok = (finite[:-1, :-1] & finite[:-1, 1:] & finite[1:, :-1] & finite[1:, 1:])
    active = np.argwhere((c > 0) & (c < 4) & ok)

    # segment endpoints keyed by crossing edge so chains can be linked
    edge_xy: dict[tuple, tuple[float, float]] = {}
    links: dict[tuple, list[tuple]] = {}

    def edge_key(kind, iy, ix):
        return (kind, iy, ix)

    def crossing(kind, iy, ix):
        key = (kind, iy, ix)
        if key not in edge_xy:
            if kind == "h":
                edge_xy[key] = _edge_point(xs[ix], ys[iy], f[iy, ix],
                                           xs[ix + 1], ys[iy], f[iy, ix + 1])
            else:
                edge_xy[key] = _edge_point(xs[ix], ys[iy], f[iy, ix],
                                           xs[ix], ys[iy + 1], f[iy + 1, ix])
        return key

    for iy, ix in active:
        s00 = pos[iy, ix]
        s10 = pos[iy, ix + 1]
        s01 = pos[iy + 1, ix]
        s11 = pos[iy + 1, ix + 1]
        bottom = s00 != s10
        top = s01 != s11
        left = s00 != s01
        right = s10 != s11
        edges = []
        if bottom:
            edges.append(crossing("h", iy, ix))
        if right:
            edges.append(crossing("v", iy, ix + 1))
        if top:
            edges.append(crossing("h", iy + 1, ix))
        if left:
            edges.append(crossing("v", iy, ix))
        if len(edges) == 2:
            pairs = [(edges[0], edges[1])]
        elif len(edges) == 4:
            center_pos = (f[iy, ix] + f[iy, ix + 1] + f[iy + 1, ix]
                          + f[iy + 1, ix + 1]) >= 0
            b, r, t, le = edges
            if center_pos == s00:
                # center joins the s00/s11 diagonal: the other two corners
                # are isolated, so bottom pairs with right, top with left
                pairs = [(b, r), (t, le)]
            else:
                pairs = [(b, le), (t, r)]
        else:
            continue  # 1 or 3 crossings cannot happen with consistent signs
        for a, b in pairs:
            links.setdefault(a, []).append(b)
            links.setdefault(b, []).append(a)

    polylines = _chain_links(links, edge_xy)
    return PlanarCurveSet(tuple(polylines), part)


def _chain_links(links, edge_xy):
    """Join edge-to-edge links into maximal polylines (open chains first)."""
    visited = set()
    polylines = []

    def walk(start, first):
        chain = [start, first]
        visited.add((start, first))
        visited.add((first, start))
        while True:
            cur, prev = chain[-1], chain[-2]
            nxt = None
            for cand in links[cur]:
                if (cur, cand) not in visited:
                    nxt = cand
                    break
            if nxt is None:
                break
            visited.add((cur, nxt))
            visited.add((nxt, cur))
            chain.append(nxt)
            if nxt == start:
                break
        return chain

    endpoints = sorted(k for k, v in links.items() if len(v) == 1)
    for start in endpoints:
        for first in links[start]:
            if (start, first) not in visited:
                chain = walk(start, first)
                polylines.append(np.array([edge_xy[k] for k in chain]))
    for start in sorted(links):  # leftover closed loops
        for first in links[start]:
            if (start, first) not in visited:
                chain = walk(start, first)
                polylines.append(np.array([edge_xy[k] for k in chain]))
    return polylines


def filter_boundary(curves: PlanarCurveSet, window: Window, h: float) -> PlanarCurveSet:
    """Drop vertices within 0.03*h of any window edge; split polylines there."""
    eps = BOUNDARY_EPS_FACTOR * h
    kept = []
    for poly in curves.polylines:
        x, y = poly[:, 0], poly[:, 1]
        good = ((np.abs(x - window.re_min) >= eps)
                & (np.abs(x - window.re_max) >= eps)
                & (np.abs(y - window.im_min) >= eps)
                & (np.abs(y - window.im_max) >= eps))
        start = None
        for i, g in enumerate(good):
            if g and start is None:
                start = i
            elif not g and start is not None:
                if i - start >= 2:
                    kept.append(poly[start:i])
                start = None
        if start is not None and len(poly) - start >= 2:
            kept.append(poly[start:])
    return PlanarCurveSet(tuple(kept), curves.part)


def intersect_curves(a: PlanarCurveSet, b: PlanarCurveSet,
                     dedup_radius: float | None = None) -> list[complex]:
    """Transversal intersections of the two polyline families.

    Segments of `a` are hashed into square spatial bins; each segment of `b`
    is tested only against candidates sharing a bin.  Points closer than the
    dedup radius are merged to their mean.
    """
    seg_a = a.segments()
    seg_b = b.segments()
    if len(seg_a) == 0 or len(seg_b) == 0:
        return []

    lengths = np.hypot(seg_a[:, 2] - seg_a[:, 0], seg_a[:, 3] - seg_a[:, 1])
    bin_size = max(float(np.median(lengths)) * 2.0, 1e-12)
    if dedup_radius is None:
        dedup_radius = 0.25 * float(np.median(lengths))

    grid: dict[tuple[int, int], list[int]] = {}
    for i, (x1, y1, x2, y2) in enumerate(seg_a):
        bx0, bx1 = sorted((int(x1 // bin_size), int(x2 // bin_size)))
        by0, by1 = sorted((int(y1 // bin_size), int(y2 // bin_size)))
        for bx in range(bx0, bx1 + 1):
            for by in range(by0, by1 + 1):
                grid.setdefault((bx, by), []).append(i)

    cand_a, cand_b = [], []
    for i, (x1, y1, x2, y2) in enumerate(seg_b):
        bx0, bx1 = sorted((int(x1 // bin_size), int(x2 // bin_size)))
        by0, by1 = sorted((int(y1 // bin_size), int(y2 // bin_size)))
        seen: set[int] = set()
        for bx in range(bx0, bx1 + 1):
            for by in range(by0, by1 + 1):
                for j in grid.get((bx, by), ()):
                    if j not in seen:
                        seen.add(j)
                        cand_a.append(j)
                        cand_b.append(i)
    if not cand_a:
        return []

    A = seg_a[np.array(cand_a)]
    B = seg_b[np.array(cand_b)]
    rx, ry = A[:, 2] - A[:, 0], A[:, 3] - A[:, 1]
    sx, sy = B[:, 2] - B[:, 0], B[:, 3] - B[:, 1]
    qpx, qpy = B[:, 0] - A[:, 0], B[:, 1] - A[:, 1]
    denom = rx * sy - ry * sx
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (qpx * sy - qpy * sx) / denom
        u = (qpx * ry - qpy * rx) / denom
    hit = (np.abs(denom) > 1e-300) & (t >= 0) & (t <= 1) & (u >= 0) & (u <= 1)
    px = A[hit, 0] + t[hit] * rx[hit]
    py = A[hit, 1] + t[hit] * ry[hit]
    points = sorted(zip(px.tolist(), py.tolist()))

    merged: list[complex] = []
    cluster: list[tuple[float, float]] = []
    for p in points:
        if cluster and math.hypot(p[0] - cluster[-1][0], p[1] - cluster[-1][1]) > dedup_radius:
            merged.append(complex(*np.mean(cluster, axis=0)))
            cluster = []
        cluster.append(p)
    if cluster:
        merged.append(complex(*np.mean(cluster, axis=0)))
    return merged


def refine_root(system: DeltaSystem, z0: complex, window: Window) -> Resonance | None:
    """Newton-polish a candidate root of Dtilde_N.

    Derivative by central complex difference.  Returns None (dropped) when the
    iteration fails to reach the acceptance residual, leaves the 10%-dilated
    window, or lands in the upper half plane.
    """
    big_window = window.dilated(0.10)
    z = complex(z0)
    residual = math.inf
    for _ in range(NEWTON_MAX_ITER):
        val, scale = closed_form_field(system, z)
        val = complex(val)
        residual = abs(val) / float(scale)
        if residual < NEWTON_TOL:
            break
        step = 1e-7 * max(1.0, abs(z0))
        fp, _ = closed_form_field(system, z + step)
        fm, _ = closed_form_field(system, z - step)
        dval = (complex(fp) - complex(fm)) / (2.0 * step)
        if dval == 0:
            return None
        z = z - val / dval
        if not big_window.contains(z):
            return None
    if residual >= ACCEPT_RESIDUAL or z.imag > 0:
        return None
    return Resonance(z=z, residual=residual)


def match_to_strings(roots: list[Resonance], strings: list[ResonanceString],
                     system: DeltaSystem, match_tol: float | None = None) -> list[Resonance]:
    """Assign each root to the nearest theory curve (in Im distance).

    Roots farther than match_tol (default 5h) from every curve stay
    unassigned.
    """
    if match_tol is None:
        match_tol = 5.0 * system.h
    out = []
    for root in roots:
        best = None
        best_dev = math.inf
        for st in strings:
            dev = abs(root.z.imag - theory_curve(st, system, root.z.real))
            if dev < best_dev:
                best, best_dev = st, dev
        if best is not None and best_dev <= match_tol:
            m_est = round(root.z.real * best.length / (math.pi * system.h))
            out.append(replace(root, matched_string=best.id, deviation=best_dev,
                               m_estimate=m_est))
        else:
            out.append(root)
    return out


def solve_window(system: DeltaSystem, window: Window, nx: int, ny: int,
                 strings: list[ResonanceString] | None = None) -> list[Resonance]:
    """Full contour-intersection pipeline; roots in canonical (Re, Im) order."""
    field = sample_grid(system, window, nx, ny)
    re_curves = filter_boundary(extract_contours(field, "real"), window, system.h)
    im_curves = filter_boundary(extract_contours(field, "imag"), window, system.h)
    dx, dy = field.cell_size
    seeds = intersect_curves(re_curves, im_curves, dedup_radius=0.25 * min(dx, dy))

    eps = BOUNDARY_EPS_FACTOR * system.h
    roots: list[Resonance] = []
    for seed in seeds:
        res = refine_root(system, seed, window)
        if res is None:
            continue
        z = res.z
        if (z.real < window.re_min + eps or z.real > window.re_max - eps
                or z.imag < window.im_min + eps or z.imag > window.im_max - eps):
            continue
        roots.append(res)

    # polished duplicates (several seeds converging to one root)
    roots.sort(key=lambda r: (r.z.real, r.z.imag))
    dedup: list[Resonance] = []
    min_gap = 0.5 * min(dx, dy)
    for r in roots:
        if dedup and abs(r.z - dedup[-1].z) < min_gap:
            if r.residual < dedup[-1].residual:
                dedup[-1] = r
            continue
        dedup.append(r)

    if strings is not None:
        dedup = match_to_strings(dedup, strings, system)
    return dedup
