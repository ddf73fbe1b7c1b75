import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfridge import scaling
from qfridge.errors import ConfigError, NoInteriorMaximumError, PhysicsConstraintError
from qfridge.scaling import (SweepSpec, ThirdLawConfig, fit_exponent, optimize_cooling, sweep,
                             third_law_params)

OPTIMAL_RATIO = 1.59362426004004009232  # root of 2(1 - exp(-x)) = x


@given(st.floats(-4.0, 6.0), st.floats(1e-3, 1e3))
def test_fit_recovers_exact_power_law(alpha, c):
    ts = np.geomspace(1e-4, 1e-2, 20)
    res = fit_exponent([(t, c * t ** alpha) for t in ts])
    assert res.alpha == pytest.approx(alpha, abs=1e-10)
    assert res.prefactor == pytest.approx(c, rel=1e-8)


def test_fit_examples():
    ts = np.geomspace(0.1, 10, 7)
    assert fit_exponent([(t, 7 * t ** 2) for t in ts]).alpha == pytest.approx(2.0, abs=1e-12)
    res = fit_exponent([(t, 3 * t ** 1.5) for t in ts])
    assert res.alpha == pytest.approx(1.5, abs=1e-12)
    assert res.r_squared == pytest.approx(1.0)


def test_fit_window_and_three_column_rows():
    rows = [(t, 0.0, t ** 3) for t in (1e-3, 1e-2, 1e-1)] + [(1.0, 0.0, 5.0)]
    res = fit_exponent(rows, window=(1e-3, 1e-1))
    assert res.alpha == pytest.approx(3.0, abs=1e-12)
    assert len(res.rows) == 4


def test_fit_rejects_bad_input():
    with pytest.raises(ConfigError):
        fit_exponent([(1.0, 1.0), (2.0, 2.0)])
    with pytest.raises(PhysicsConstraintError):
        fit_exponent([(1.0, 1.0), (2.0, -2.0), (3.0, 3.0)])


def test_sweep_spec_validation():
    with pytest.raises(ConfigError):
        SweepSpec("eta", 0.0, 1.0, 1)
    with pytest.raises(ConfigError):
        SweepSpec("eta", 0.0, 1.0, 5, scale="log")
    with pytest.raises(ConfigError):
        SweepSpec("bogus", 0.0, 1.0, 5)
    with pytest.raises(ConfigError):
        SweepSpec("eta", 0.0, 1.0, 5, family="bogus")
    assert SweepSpec("eta", 1e-3, 1.0, 4, scale="log").grid() == pytest.approx([1e-3, 1e-2, 1e-1, 1.0])


def test_unknown_parameter_rejected():
    with pytest.raises(ConfigError, match="nope"):
        scaling.evaluate("gaussian", {"nope": 1.0})


def test_eta_sweep_cooling_grows():
    rows = sweep(SweepSpec("eta", 0.0, 2.0, 11))
    jc = [r.j_cold for r in rows]
    assert jc[0] == 0.0
    assert all(b > a for a, b in zip(jc, jc[1:]))
    assert all(r.audit_ok for r in rows)


def test_infeasible_rows_are_flagged():
    rows = sweep(SweepSpec("lambda_rate", 1e-4, 1.0, 5, scale="log", family="poisson",
                           fixed={"mode": "lowT", "lambda_per_omega_c": None}))
    assert [r.feasible for r in rows] == [True, True, True, False, False]
    bad = rows[-1]
    assert math.isnan(bad.j_cold) and bad.message


def test_parallel_sweep_matches_serial():
    spec = SweepSpec("xi0", 0.0, math.pi, 9, family="poisson")
    # repr so that NaN cells compare equal
    assert repr(sweep(spec, jobs=2)) == repr(sweep(spec))


def test_gaussian_optimum_ratio():
    p = third_law_params("gaussian", 1, ThirdLawConfig(omega_h=100.0))
    opt = optimize_cooling("gaussian", {**p, "t_cold": 1e-3})
    assert opt.interior
    assert opt.argmax / 1e-3 == pytest.approx(OPTIMAL_RATIO, abs=1e-3)
    assert opt.bracket[0] < opt.argmax < opt.bracket[1]
    assert scaling.audit(opt.report).ok


def test_optimum_needs_a_cold_bath_below_the_hot_one():
    with pytest.raises(PhysicsConstraintError):
        optimize_cooling("gaussian", {"t_cold": 3.0, "t_hot": 2.0})


def test_boundary_optimum_is_rejected():
    with pytest.raises(NoInteriorMaximumError):
        optimize_cooling("gaussian", {"omega_h": 100.0, "t_hot": 2.0, "t_cold": 1.0})


def test_optimum_needs_bounds_for_other_parameters():
    with pytest.raises(ConfigError):
        optimize_cooling("gaussian", parameter="eta")


def test_poisson_kick_angle_optimum():
    opt = optimize_cooling("poisson", {"mode": "lowT"}, "xi0")
    assert opt.argmax == pytest.approx(math.pi / 2, abs=opt.grid_step)
    assert opt.interior


@pytest.mark.parametrize("family", ["gaussian", "poisson"])
def test_third_law_exponents_short(family):
    cfg = ThirdLawConfig(points=5, sensitivity_factor=None)
    for entry in scaling.third_law_study(family, (1, 2), cfg):
        assert entry.result.alpha == pytest.approx(entry.d + 1, abs=0.1)
        assert entry.result.audit_failures == 0
        assert entry.sensitivity is None
