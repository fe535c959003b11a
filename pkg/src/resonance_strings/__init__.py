"""Scattering resonances of N semiclassical delta barriers.

Two routes to the resonance set and the bridge between them: the Newton
polygon of the barrier configuration predicts strings of resonances in
closed form, and a contour-intersection solver locates the actual zeros of
the scattering determinant so the two can be compared.
"""

from .determinant import (DeterminantValue, closed_form, closed_form_field,
                          direct_determinant, direct_scaled, recurrence_form,
                          truncated_form)
from .fixtures import Fixture, all_fixtures, get_fixture
from .model import (Config, ConfigError, DeltaBarrier, DeltaSystem,
                    OverflowGuardError, PoleError, Window, default_window,
                    parse_config, system_of, validate)
from .polygon import (ConfigurationError, GenericityReport, NewtonPolygon,
                      NonGenericError, Slope, build_polygon, check_genericity,
                      dominant_pair, interval_partition, slope_set,
                      string_count_bound)
from .report import (RunReport, compare_summary, render_svg, report_to_json,
                     resonances_to_csv, run_pipeline)
from .solver import (Resonance, refine_root, sample_grid, solve_window)
from .theory import (PredictedPoint, ResonanceString, predict_points,
                     strings_for, theory_curve)

__version__ = "1.0.0"

__all__ = [
    "Config", "ConfigError", "ConfigurationError", "DeltaBarrier",
    "DeltaSystem", "DeterminantValue", "Fixture", "GenericityReport",
    "NewtonPolygon", "NonGenericError", "OverflowGuardError", "PoleError",
    "PredictedPoint", "Resonance", "ResonanceString", "RunReport", "Slope",
    "Window", "all_fixtures", "build_polygon", "check_genericity",
    "closed_form", "closed_form_field", "compare_summary", "default_window",
    "direct_determinant", "direct_scaled", "dominant_pair", "get_fixture",
    "interval_partition", "parse_config", "predict_points", "recurrence_form",
    "refine_root", "render_svg", "report_to_json", "resonances_to_csv",
    "run_pipeline", "sample_grid", "slope_set", "solve_window",
    "string_count_bound", "strings_for", "system_of", "theory_curve",
    "truncated_form", "validate",
]
