import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from qfridge import gaussian, poisson

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

# bath temperatures that put the bare occupations at exactly 1/4 and 1/2
T_HOT_QUARTER = 2.0 / math.log(5.0)
T_COLD_HALF = 1.0 / math.log(3.0)

KICKED_REF = dict(omega_h=10.0, omega_c=1e-3, t_hot=2.0, t_cold=1e-3, lambda_rate=1e-3, zeta=1e-4)


@pytest.fixture
def worked_gaussian():
    return gaussian.make_model(2.0, 1.0, T_HOT_QUARTER, T_COLD_HALF, 0.5, gamma_h=1.0, gamma_c=1.0)


@pytest.fixture
def kicked_model():
    def make(xi0=math.pi / 2, mode="lowT"):
        return poisson.make_model(xi0=xi0, mode=mode, **KICKED_REF)
    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
