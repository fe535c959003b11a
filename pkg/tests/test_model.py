"""Unit tests for the system model, configuration parsing, and basic factors."""

import cmath
import math

import pytest

from resonance_strings.model import (
    Config, ConfigError, DeltaBarrier, DeltaSystem, OverflowGuardError,
    PoleError, Window, default_window, omega_pow, parse_config, reflection_r,
    system_of, transmission_t, validate)


def test_system_of_builds_ordered_tuple():
    sys3 = system_of(0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0])
    assert sys3.n == 3
    assert sys3.deltas[1] == DeltaBarrier(4.0, 0.5, 1.0)
    assert sys3.position(3) == 6.0


def test_coupling_scaling():
    sys1 = system_of(0.1, [0.0], [2.0], [3.0])
    assert sys1.coupling(1) == pytest.approx(3.0 * 0.1 ** 2.0)


def test_validate_accepts_good_system():
    assert validate(system_of(0.1, [0.0, 1.0], [0.5, 1.0])) == []


def test_validate_flags_each_violation():
    bad = DeltaSystem(-1.0, (DeltaBarrier(1.0, 0.0, 0.0),
                             DeltaBarrier(0.5, 1.0, 1.0)))
    issues = validate(bad)
    joined = "\n".join(issues)
    assert "h-nonpositive" in joined
    assert "beta-nonpositive" in joined
    assert "c-zero" in joined
    assert "positions-not-increasing" in joined


def test_validate_flags_nonfinite():
    bad = DeltaSystem(0.1, (DeltaBarrier(float("nan"), 1.0, 1.0),))
    assert any("nonfinite" in s for s in validate(bad))


def test_window_rejects_bad_bounds():
    with pytest.raises(ValueError):
        Window(1.0, 0.5, -1.0, 0.0)
    with pytest.raises(ValueError):
        Window(-1.0, 2.0, -1.0, 0.0)


def test_window_contains_and_dilated():
    w = Window(0.5, 1.5, -1.0, 0.0)
    assert w.contains(1.0 - 0.5j)
    assert not w.contains(2.0 - 0.5j)
    big = w.dilated(0.10)
    assert big.re_min < w.re_min and big.re_max > w.re_max
    assert big.contains(1.55 - 0.5j)


def test_omega_pow_matches_definition():
    sys1 = system_of(0.1, [0.0], [1.0])
    z = 1.0 - 0.2j
    assert omega_pow(sys1, z, 2.0) == pytest.approx(cmath.exp(1j * z * 2.0 / 0.1))


def test_omega_pow_overflow_guard():
    sys1 = system_of(1e-4, [0.0], [1.0])
    with pytest.raises(OverflowGuardError):
        omega_pow(sys1, 1.0 - 0.5j, 2.0)


def test_reflection_transmission_identity():
    sys2 = system_of(0.1, [0.0, 6.0], [2.0, 2.0])
    z = 0.7 - 0.05j
    for j in (1, 2):
        assert transmission_t(sys2, j, z) - reflection_r(sys2, j, z) == \
            pytest.approx(1.0)


def test_pole_detection():
    sys1 = system_of(0.1, [0.0], [2.0], [1.0])
    z_pole = sys1.coupling(1) / 2j
    with pytest.raises(PoleError):
        reflection_r(sys1, 1, z_pole)


def test_parse_config_roundtrip():
    cfg = parse_config({
        "h": 0.1,
        "deltas": [{"x": 0, "beta": 2.0, "c": 1.0},
                   {"x": 6, "beta": 2.0, "c": 1.0}],
        "window": {"re_min": 0.05, "re_max": 2.0, "im_min": -0.3, "im_max": 0.0},
        "grid": {"nx": 256, "ny": 256},
    })
    assert isinstance(cfg, Config)
    assert cfg.system.n == 2
    assert cfg.window.re_max == 2.0
    assert cfg.nx == cfg.ny == 256
    assert cfg.notices == []


def test_parse_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        parse_config({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}],
                      "bogus": 1})
    with pytest.raises(ConfigError):
        parse_config({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1,
                                            "extra": 2}]})


def test_parse_config_sorts_unsorted_deltas_with_notice():
    cfg = parse_config({"h": 0.1,
                        "deltas": [{"x": 6, "beta": 2.0, "c": 1.0},
                                   {"x": 0, "beta": 0.5, "c": 1.0}]})
    assert [d.x for d in cfg.system.deltas] == [0.0, 6.0]
    assert any("unsorted" in n for n in cfg.notices)


def test_parse_config_rejects_invalid_system():
    with pytest.raises(ConfigError):
        parse_config({"h": -1.0, "deltas": [{"x": 0, "beta": 1, "c": 1}]})
    with pytest.raises(ConfigError):
        parse_config({"h": 0.1, "deltas": []})


def test_default_window_covers_flat_strings():
    sys3 = system_of(0.1, [0.0, 4.0, 6.0], [0.5, 0.5, 2.0])
    w = default_window(sys3)
    assert w.re_min == 0.1 and w.re_max == 2.0
    # deepest flat string for this system sits near -0.086
    assert w.im_min < -0.086
    assert w.im_max == 0.0
