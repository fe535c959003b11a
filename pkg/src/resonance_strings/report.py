"""End-to-end pipeline reports and deterministic CSV/JSON/SVG emission.

run_pipeline ties everything together: polygon construction, string
prediction, grid solve, matching, and per-string statistics.  All emitters
are deterministic: fixed field order, 17-significant-digit floats, canonical
root ordering, so identical configs produce byte-identical artifacts.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from .model import Config, DeltaSystem, Window, default_window
from .polygon import (NewtonPolygon, NonGenericError, build_polygon,
                      check_genericity, interval_partition)
from .solver import (GridField, Resonance, extract_contours,
                     filter_boundary, sample_grid, solve_window)
from .theory import ResonanceString, strings_for, theory_curve

SCHEMA_VERSION = 1
DEFAULT_GRID = 2500


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class StringStats:
    string_id: str
    count: int
    mean_deviation: float | None
    max_deviation: float | None


@dataclass
class RunReport:
    config: dict
    polygon_summary: dict
    strings: list[ResonanceString]
    resonances: list[Resonance]
    stats: list[StringStats]
    timing_s: float
    notices: list[str] = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION


def polygon_summary(polygon: NewtonPolygon) -> dict:
    """JSON-ready digest of the polygon: hull, slopes, partition, bounds."""
    report = check_genericity(polygon.system)
    summary = {
        "n": polygon.system.n,
        "generic": report.generic,
        "violations": list(report.messages),
        "hull": [[_fmt(p.lam), _fmt(p.nu)] for p in polygon.hull],
        "slopes": [
            {
                "gamma": _fmt(s.gamma),
                "gamma_exact": f"{s.gamma.numerator}/{s.gamma.denominator}",
                "kind": s.kind,
                "pair": list(s.pair),
                "near": s.near,
                "far": s.far,
            }
            for s in polygon.slopes
        ],
    }
    if report.generic:
        partition, position = interval_partition(polygon)
        summary["partition"] = partition
        summary["dominant_position"] = position
    return summary


def _config_echo(system: DeltaSystem, window: Window, nx: int, ny: int) -> dict:
    return {
        "h": _fmt(system.h),
        "deltas": [{"x": _fmt(d.x), "beta": _fmt(d.beta), "c": _fmt(d.c)}
                   for d in system.deltas],
        "window": {"re_min": _fmt(window.re_min), "re_max": _fmt(window.re_max),
                   "im_min": _fmt(window.im_min), "im_max": _fmt(window.im_max)},
        "grid": {"nx": nx, "ny": ny},
    }


def run_pipeline(config: Config, allow_nongeneric: bool = False) -> RunReport:
    """Polygon, strings, numeric roots, matching, statistics.

    Raises NonGenericError for non-generic input unless allow_nongeneric, in
    which case strings are skipped and raw roots are reported unmatched.
    """
    t0 = time.perf_counter()
    system = config.system
    window = config.window or default_window(system)
    nx = config.nx or DEFAULT_GRID
    ny = config.ny or DEFAULT_GRID
    notices = list(config.notices)

    polygon = build_polygon(system)
    summary = polygon_summary(polygon)
    strings: list[ResonanceString] = []
    if summary["generic"]:
        strings = strings_for(system, polygon)
    elif not allow_nongeneric:
        raise NonGenericError(check_genericity(system))
    else:
        notices.append("non-generic configuration: strings skipped, "
                       "roots reported unmatched")

    roots = solve_window(system, window, nx, ny, strings or None)

    stats = []
    for st in strings:
        mine = [r for r in roots if r.matched_string == st.id]
        devs = [r.deviation for r in mine]
        stats.append(StringStats(
            string_id=st.id,
            count=len(mine),
            mean_deviation=(sum(devs) / len(devs)) if devs else None,
            max_deviation=max(devs) if devs else None,
        ))

    return RunReport(
        config=_config_echo(system, window, nx, ny),
        polygon_summary=summary,
        strings=strings,
        resonances=roots,
        stats=stats,
        timing_s=time.perf_counter() - t0,
        notices=notices,
    )


def report_to_json(report: RunReport) -> str:
    """Deterministic JSON text (timing excluded from determinism guarantees)."""
    doc = {
        "schema_version": report.schema_version,
        "config": report.config,
        "polygon": report.polygon_summary,
        "strings": [
            {
                "id": s.id, "gamma": _fmt(s.gamma), "kind": s.kind,
                "pair": list(s.pair), "near": s.near, "far": s.far,
                "length": _fmt(s.length), "spacing": _fmt(s.spacing),
            }
            for s in report.strings
        ],
        "resonances": [_res_row(r) for r in report.resonances],
        "stats": [
            {
                "string_id": st.string_id, "count": st.count,
                "mean_deviation": None if st.mean_deviation is None
                else _fmt(st.mean_deviation),
                "max_deviation": None if st.max_deviation is None
                else _fmt(st.max_deviation),
            }
            for st in report.stats
        ],
        "notices": report.notices,
        "timing_s": _fmt(report.timing_s),
    }
    return json.dumps(doc, indent=2) + "\n"


def _res_row(r: Resonance) -> dict:
    return {
        "re": _fmt(r.z.real), "im": _fmt(r.z.imag),
        "residual": _fmt(r.residual),
        "string_id": r.matched_string,
        "deviation": None if r.deviation is None else _fmt(r.deviation),
        "m_estimate": r.m_estimate,
    }


def resonances_to_csv(roots: list[Resonance]) -> str:
    lines = ["re,im,residual,string_id,deviation,m_estimate"]
    for r in roots:
        lines.append(",".join([
            _fmt(r.z.real), _fmt(r.z.imag), _fmt(r.residual),
            r.matched_string or "",
            "" if r.deviation is None else _fmt(r.deviation),
            "" if r.m_estimate is None else str(r.m_estimate),
        ]))
    return "\n".join(lines) + "\n"


def compare_summary(report: RunReport) -> str:
    """Per-string comparison (count, deviations) as deterministic JSON."""
    doc = {
        "schema_version": report.schema_version,
        "h": report.config["h"],
        "strings": [
            {
                "string_id": st.string_id,
                "count": st.count,
                "mean_deviation": None if st.mean_deviation is None
                else _fmt(st.mean_deviation),
                "max_deviation": None if st.max_deviation is None
                else _fmt(st.max_deviation),
            }
            for st in report.stats
        ],
        "unmatched": sum(1 for r in report.resonances
                         if r.matched_string is None),
    }
    return json.dumps(doc, indent=2) + "\n"


# --- SVG rendering ------------------------------------------------------

SVG_W, SVG_H, SVG_PAD = 880.0, 560.0, 40.0
CURVE_SAMPLES = 512


class _Mapper:
    def __init__(self, window: Window):
        self.w = window
        self.sx = (SVG_W - 2 * SVG_PAD) / (window.re_max - window.re_min)
        self.sy = (SVG_H - 2 * SVG_PAD) / (window.im_max - window.im_min)

    def x(self, re: float) -> float:
        return SVG_PAD + (re - self.w.re_min) * self.sx

    def y(self, im: float) -> float:
        return SVG_H - SVG_PAD - (im - self.w.im_min) * self.sy


def _polyline_svg(points, color: str) -> str:
    coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in points)
    return (f'<polyline points="{coords}" fill="none" stroke="{color}" '
            'stroke-width="1"/>')


def render_svg(system: DeltaSystem, window: Window, nx: int, ny: int,
               field: GridField | None = None,
               roots: list[Resonance] | None = None,
               strings: list[ResonanceString] | None = None) -> str:
    """Composite plot: zero contours of Re/Im parts, roots, theory curves.

    Any layer may be omitted by passing None; missing inputs are computed
    from the system.  Output is plain hand-assembled SVG.
    """
    if field is None:
        field = sample_grid(system, window, nx, ny)
    if roots is None:
        roots = solve_window(system, window, nx, ny)
    if strings is None:
        try:
            strings = strings_for(system)
        except NonGenericError:
            strings = []
    m = _Mapper(window)

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_W:.0f}" '
        f'height="{SVG_H:.0f}" viewBox="0 0 {SVG_W:.0f} {SVG_H:.0f}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{SVG_PAD}" y="{SVG_PAD}" width="{SVG_W - 2 * SVG_PAD}" '
        f'height="{SVG_H - 2 * SVG_PAD}" fill="none" stroke="black"/>',
    ]

    parts.append('<g id="contours">')
    for part_name, color in (("real", "#cc2222"), ("imag", "#2244cc")):
        curves = filter_boundary(extract_contours(field, part_name),
                                 window, system.h)
        for poly in curves.polylines:
            pts = [(m.x(px), m.y(py)) for px, py in poly]
            parts.append(_polyline_svg(pts, color))
    parts.append('</g>')

    parts.append('<g id="theory-curves">')
    for st in strings:
        lo = max(window.re_min, 1e-9)
        pts = []
        for i in range(CURVE_SAMPLES):
            re = lo + (window.re_max - lo) * i / (CURVE_SAMPLES - 1)
            im = theory_curve(st, system, re)
            if window.im_min <= im <= window.im_max:
                pts.append((m.x(re), m.y(im)))
        if len(pts) >= 2:
            parts.append(_polyline_svg(pts, "#111111"))
    parts.append('</g>')

    parts.append('<g id="roots">')
    for r in roots:
        parts.append(f'<circle cx="{m.x(r.z.real):.2f}" cy="{m.y(r.z.imag):.2f}" '
                     'r="3" fill="#22aa44"/>')
    parts.append('</g>')

    parts.append('</svg>')
    return "\n".join(parts) + "\n"
