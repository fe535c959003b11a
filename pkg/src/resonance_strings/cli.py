"""Command line entry point.

Subcommands:

* ``polygon``  -- slope set, dominant pair, genericity for a config.
* ``predict``  -- theory strings and predicted points.
* ``solve``    -- numeric resonances as CSV (or JSON with --format json).
* ``compare``  -- per-string deviation summary as JSON.
* ``plot``     -- composite SVG (contours, roots, theory curves).
* ``fixtures`` -- list the built-in benchmark configurations.

Exit codes: 0 success, 1 configuration or usage error, 2 non-generic input
(unless --allow-nongeneric).  The environment variable RES_THREADS caps the
thread count of the underlying numeric libraries; the pipeline itself is
single-threaded and its output is identical for any setting.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .fixtures import all_fixtures, get_fixture
from .model import Config, ConfigError, default_window, parse_config
from .polygon import NonGenericError, build_polygon
from .report import (DEFAULT_GRID, compare_summary, polygon_summary,
                     render_svg, report_to_json, resonances_to_csv,
                     run_pipeline)
from .theory import predict_points, strings_for

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NONGENERIC = 2


def _apply_thread_cap() -> None:
    cap = os.environ.get("RES_THREADS")
    if cap:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS"):
            os.environ.setdefault(var, cap)


def _load_config(args) -> Config:
    if args.fixture:
        fx = get_fixture(args.fixture)
        return Config(system=fx.system)
    if not args.config:
        raise ConfigError("either --config FILE or --fixture NAME is required")
    with open(args.config, encoding="utf-8") as fh:
        doc = json.load(fh)
    return parse_config(doc)


def _resolve(config: Config, args):
    window = config.window or default_window(config.system)
    nx = args.nx or config.nx or DEFAULT_GRID
    ny = args.ny or config.ny or DEFAULT_GRID
    return Config(system=config.system, window=window, nx=nx, ny=ny,
                  notices=config.notices)


def _write(args, name: str, text: str) -> None:
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        path = os.path.join(args.out, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(path)
    else:
        sys.stdout.write(text)


def cmd_polygon(args) -> int:
    config = _load_config(args)
    summary = polygon_summary(build_polygon(config.system))
    _write(args, "polygon.json", json.dumps(summary, indent=2) + "\n")
    if not summary["generic"] and not args.allow_nongeneric:
        for msg in summary["violations"]:
            print(f"non-generic: {msg}", file=sys.stderr)
        return EXIT_NONGENERIC
    return EXIT_OK


def cmd_predict(args) -> int:
    config = _resolve(_load_config(args), args)
    strings = strings_for(config.system)
    rows = []
    for st in strings:
        for pt in predict_points(st, config.system, config.window):
            rows.append({"string_id": st.id, "m": pt.m,
                         "re": format(pt.z.real, ".17g"),
                         "im": format(pt.z.imag, ".17g")})
    doc = {"strings": [{"id": s.id, "gamma": format(s.gamma, ".17g"),
                        "kind": s.kind, "pair": list(s.pair)}
                       for s in strings],
           "points": rows}
    _write(args, "predict.json", json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_solve(args) -> int:
    config = _resolve(_load_config(args), args)
    report = run_pipeline(config, allow_nongeneric=args.allow_nongeneric)
    for note in report.notices:
        print(f"notice: {note}", file=sys.stderr)
    if args.format == "json":
        _write(args, "solve.json", report_to_json(report))
    else:
        _write(args, "resonances.csv", resonances_to_csv(report.resonances))
    return EXIT_OK


def cmd_compare(args) -> int:
    config = _resolve(_load_config(args), args)
    report = run_pipeline(config, allow_nongeneric=args.allow_nongeneric)
    _write(args, "compare.json", compare_summary(report))
    return EXIT_OK


def cmd_plot(args) -> int:
    config = _resolve(_load_config(args), args)
    svg = render_svg(config.system, config.window, config.nx, config.ny)
    _write(args, "plot.svg", svg)
    return EXIT_OK


def cmd_fixtures(args) -> int:
    rows = []
    for name, fx in sorted(all_fixtures().items()):
        rows.append({
            "name": name,
            "h": format(fx.system.h, ".17g"),
            "n": fx.system.n,
            "generic": fx.generic,
            "expected_count": fx.expected_count,
            "expected_dominant": list(fx.expected_dominant)
            if fx.expected_dominant else None,
            "note": fx.note,
        })
    _write(args, "fixtures.json", json.dumps(rows, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rescli",
        description="Scattering resonances of semiclassical delta barriers: "
                    "Newton-polygon string prediction and numerical root "
                    "finding.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=True):
        if needs_config:
            p.add_argument("--config", help="JSON configuration file")
            p.add_argument("--fixture", help="built-in fixture name")
            p.add_argument("--allow-nongeneric", action="store_true",
                           help="continue on non-generic configurations")
            p.add_argument("--nx", type=int, help="grid columns")
            p.add_argument("--ny", type=int, help="grid rows")
        p.add_argument("--out", help="output directory (default: stdout)")

    p = sub.add_parser("polygon", help="slope set and genericity report")
    common(p)
    p.set_defaults(func=cmd_polygon)

    p = sub.add_parser("predict", help="theory strings and predicted points")
    common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("solve", help="numeric resonances")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compare", help="numeric vs theory deviation summary")
    common(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("plot", help="SVG of contours, roots, theory curves")
    common(p)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("fixtures", help="list built-in configurations")
    common(p, needs_config=False)
    p.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    _apply_thread_cap()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KeyError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonGenericError as exc:
        for msg in exc.report.messages:
            print(f"non-generic: {msg}", file=sys.stderr)
        return EXIT_NONGENERIC


if __name__ == "__main__":
    sys.exit(main())
