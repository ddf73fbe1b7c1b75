import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qfridge.errors import ConfigError, PhysicsConstraintError
from qfridge.thermo import (BathSpec, CurrentsReport, EntropyReport, MomentState, OscillatorPair,
                            bath_rate, carnot_cop, check_cop_chain, cooling_window,
                            entropy_production, planck_occupation)

pos = st.floats(1e-3, 1e3)


def test_planck_reference_value():
    # 1/(e^0.1 - 1), 30-digit reference
    assert planck_occupation(1.0, 10.0) == pytest.approx(9.50833194477504962, rel=1e-14)
    assert planck_occupation(1.0, 1.0) == pytest.approx(0.581976706869326424, rel=1e-14)


def test_planck_zero_temperature_and_bad_frequency():
    assert planck_occupation(2.0, 0.0) == 0.0
    with pytest.raises(PhysicsConstraintError):
        planck_occupation(0.0, 1.0)
    with pytest.raises(PhysicsConstraintError):
        planck_occupation(-1.0, 1.0)


def test_planck_does_not_overflow_at_large_argument():
    assert planck_occupation(1.0, 1e-4) == 0.0
    assert planck_occupation(1.0, 1e-2) == pytest.approx(math.exp(-100), rel=1e-12)


@given(pos, pos)
def test_detailed_balance(omega, temperature):
    n = planck_occupation(omega, temperature)
    # absorption / emission ratio
    assert n / (n + 1) == pytest.approx(math.exp(-omega / temperature), rel=1e-10, abs=1e-300)


@given(pos, pos, pos)
def test_planck_monotone(omega, t1, t2):
    lo, hi = sorted((t1, t2))
    assert planck_occupation(omega, lo) <= planck_occupation(omega, hi)


def test_high_temperature_limit():
    assert planck_occupation(1.0, 1e6) == pytest.approx(1e6 - 0.5, rel=1e-9)


def test_bath_spec_validation():
    with pytest.raises(PhysicsConstraintError):
        BathSpec(-1.0)
    with pytest.raises((ConfigError, PhysicsConstraintError)):
        BathSpec(1.0, dimension_d=0)
    with pytest.raises((ConfigError, PhysicsConstraintError)):
        BathSpec(1.0, coupling_kappa=0.0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_spectral_rate(d):
    assert bath_rate(0.5, BathSpec(1.0, d, 0.2)) == pytest.approx(0.2 * 0.5 ** d)


def test_cooling_window_edge():
    pair = OscillatorPair(2.0, 1.0)
    assert cooling_window(pair, 4.0, 2.1)
    assert not cooling_window(pair, 4.0, 2.0)
    assert not cooling_window(pair, 4.0, 1.9)


def test_oscillator_pair_refrigerator_flag():
    assert OscillatorPair(2.0, 1.0).is_refrigerator
    assert not OscillatorPair(1.0, 2.0).is_refrigerator
    with pytest.raises(PhysicsConstraintError):
        OscillatorPair(0.0, 1.0)


def test_first_law_residual_and_scale():
    cur = CurrentsReport(-3.0, 1.0, 2.0)
    assert cur.first_law_residual == 0.0
    assert cur.scale == 3.0
    assert cur.first_law_ok()
    assert not CurrentsReport(-3.0, 1.0, 2.1).first_law_ok()


def test_entropy_production_signs():
    ent = entropy_production(CurrentsReport(-2.0, 1.0, 1.0), 2.0, 1.0)
    assert ent.sigma_hot == 1.0 and ent.sigma_cold == -1.0 and ent.sigma_total == 0.0
    assert not ent.violation


def test_entropy_violation_is_flagged_not_raised():
    # heat pulled out of the hot bath and dumped into the cold one with no work
    ent = entropy_production(CurrentsReport(-1.0, 1.0, 0.0), 2.0, 1.0)
    assert isinstance(ent, EntropyReport)
    assert ent.violation and ent.sigma_total < 0


def test_entropy_needs_positive_temperatures():
    with pytest.raises(PhysicsConstraintError):
        entropy_production(CurrentsReport(0.0, 0.0, 0.0), 0.0, 1.0)


def test_carnot_and_cop_chain():
    assert carnot_cop(2.0, 1.0) == 1.0
    assert check_cop_chain(0.5, 0.9, 1.0)
    assert not check_cop_chain(0.95, 0.9, 1.0)
    assert not check_cop_chain(0.5, 1.1, 1.0)
    with pytest.raises(ValueError):
        check_cop_chain(float("nan"), 1.0, 2.0)


def test_moment_state_populations():
    m = MomentState(0.0, 0.0, 0.2, 1.0)
    assert m.populations == (0.6, 0.4)
    assert np.allclose(m.as_tuple(), (0, 0, 0.2, 1.0))
