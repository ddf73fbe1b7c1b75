"""Refrigerator driven by Gaussian white noise ``<f(t) f(t')> = 2 eta delta(t - t')``.

The noise couples the oscillators through ``f(t) X`` and averages to the
dephasing generator ``-eta [X, [X, .]]``.  Hot and cold baths relax the
``a`` and ``b`` oscillators towards their own Planck occupations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PhysicsConstraintError
from .moments import N, Z, dephasing_power, su2_moment_system, to_state, two_mode_balance
from .thermo import (BathSpec, CurrentsReport, MomentState, OscillatorPair,
                     SteadyStateReport, bath_rate, carnot_cop, entropy_production,
                     planck_occupation)


@dataclass(frozen=True)
class GaussianModel:
    """Gaussian-noise refrigerator.

    ``gamma_h``/``gamma_c`` default to the spectral rates of the baths at
    ``omega_h``/``omega_c``; pass them explicitly to override.
    """

    pair: OscillatorPair
    hot: BathSpec
    cold: BathSpec
    eta: float
    gamma_h: float | None = None
    gamma_c: float | None = None

    def __post_init__(self):
        if self.gamma_h is None:
            object.__setattr__(self, "gamma_h", bath_rate(self.pair.omega_h, self.hot))
        if self.gamma_c is None:
            object.__setattr__(self, "gamma_c", bath_rate(self.pair.omega_c, self.cold))
        if not (self.gamma_h > 0 and self.gamma_c > 0):
            raise PhysicsConstraintError(
                f"bath rates must be > 0, got gamma_h={self.gamma_h}, gamma_c={self.gamma_c}")
        if not self.eta >= 0:
            raise PhysicsConstraintError(f"noise strength eta must be >= 0, got {self.eta}")

    @property
    def n_hot(self) -> float:
        return planck_occupation(self.pair.omega_h, self.hot.temperature)

    @property
    def n_cold(self) -> float:
        return planck_occupation(self.pair.omega_c, self.cold.temperature)


def make_model(omega_h, omega_c, t_hot, t_cold, eta, gamma_h=None, gamma_c=None,
               kappa_h=0.1, kappa_c=0.1, d_h=1, d_c=1) -> GaussianModel:
    return GaussianModel(
        OscillatorPair(omega_h, omega_c),
        BathSpec(t_hot, d_h, kappa_h, "hot"),
        BathSpec(t_cold, d_c, kappa_c, "cold"),
        eta, gamma_h, gamma_c)


def moment_generator_full(model: GaussianModel) -> tuple[np.ndarray, np.ndarray]:
    """4x4 system for ``(x, y, z, n)`` in the bare ``a``, ``b`` basis."""
    p = model.pair
    return su2_moment_system(
        p.omega_h - p.omega_c, model.gamma_h, model.gamma_c,
        model.gamma_h * model.n_hot, model.gamma_c * model.n_cold, model.eta)


def moment_generator(model: GaussianModel) -> tuple[np.ndarray, np.ndarray]:
    """The decoupled ``(n, z)`` block: ``d/dt (n, z) = A @ (n, z) + b``."""
    A, b = moment_generator_full(model)
    idx = [N, Z]
    return A[np.ix_(idx, idx)], b[idx]


def _deviation(model: GaussianModel) -> np.ndarray:
    # Solve for (n, z) relative to the uncoupled equilibrium (N_h + N_c, N_h - N_c).
    # The bath part annihilates that point exactly, so only the noise term
    # -4 eta z_0 drives the deviation; this avoids cancelling large occupations.
    A, _ = moment_generator(model)
    z0 = model.n_hot - model.n_cold
    rhs = np.array([0.0, 4.0 * model.eta * z0])
    try:
        return np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - A is negative definite
        raise ArithmeticError("singular moment generator; model is inconsistent") from exc


def _balance(model: GaussianModel) -> tuple[float, float, float]:
    return two_mode_balance(model.n_hot, model.n_cold, model.gamma_h, model.gamma_c, model.eta)


def steady_state(model: GaussianModel) -> MomentState:
    """Stationary SU(2) moments; ``x = y = 0`` since nothing sources them."""
    z, da, db = _balance(model)
    return MomentState(0.0, 0.0, z, model.n_hot + model.n_cold + da + db)


def _bath_flows(model: GaussianModel) -> tuple[float, float]:
    """Excitation flows ``Gamma_k (N_k - <n_k>)`` into the a and b modes."""
    _, da, db = _balance(model)
    return -model.gamma_h * da, -model.gamma_c * db


def cooling_current(model: GaussianModel) -> float:
    """Closed-form cooling power ``omega_c (N_c - N_h) / (1/(2 eta) + 1/G_h + 1/G_c)``."""
    if model.eta == 0:
        return 0.0
    denom = 0.5 / model.eta + 1.0 / model.gamma_h + 1.0 / model.gamma_c
    return model.pair.omega_c * (model.n_cold - model.n_hot) / denom


def cooling_current_moments(model: GaussianModel) -> float:
    """Cooling power ``omega_c Gamma_c (N_c - <b'b>)`` from the numerical ``(n, z)`` solve."""
    if model.eta == 0:
        return 0.0
    dn, dz = _deviation(model)
    return -model.pair.omega_c * model.gamma_c * 0.5 * (dn - dz)


def all_currents(model: GaussianModel) -> CurrentsReport:
    p = model.pair
    flow_a, flow_b = _bath_flows(model)
    state = steady_state(model)
    j_noise = dephasing_power(model.eta, p.omega_h - p.omega_c, (1.0, 0.0, 0.0), state)
    return CurrentsReport(p.omega_h * flow_a, p.omega_c * flow_b, j_noise)


def cop_otto(pair: OscillatorPair) -> float:
    if not pair.omega_h > pair.omega_c:
        raise PhysicsConstraintError(
            f"Otto COP needs omega_h > omega_c, got {pair.omega_h} <= {pair.omega_c}")
    return pair.omega_c / (pair.omega_h - pair.omega_c)


def work_bath_equivalent_eta(gamma_w: float, n_w: float) -> float:
    """Gaussian noise strength reproduced by a hot work bath (``N_w -> inf``).

    Jumps ``a b'`` at rate ``G_w (N_w + 1)`` and ``a' b`` at rate ``G_w N_w``
    move excitations between the modes at ``G_w N_w`` each way, which is the
    ``-2 eta Z`` population transfer of the dephasing generator when
    ``eta = G_w N_w / 2``.
    """
    if not gamma_w > 0:
        raise PhysicsConstraintError(f"gamma_w must be > 0, got {gamma_w}")
    if not n_w >= 0:
        raise PhysicsConstraintError(f"n_w must be >= 0, got {n_w}")
    return 0.5 * gamma_w * n_w


def evaluate(model: GaussianModel) -> SteadyStateReport:
    """Steady state, currents, COPs and entropy production in one report."""
    p = model.pair
    t_h, t_c = model.hot.temperature, model.cold.temperature
    state = steady_state(model)
    currents = all_currents(model)
    entropy = entropy_production(currents, t_h, t_c)
    cop = None
    if currents.j_cold > 0 and currents.j_noise > 0:
        cop = currents.j_cold / currents.j_noise
    return SteadyStateReport(
        moments=state,
        currents=currents,
        entropy=entropy,
        cop=cop,
        cop_otto=cop_otto(p) if p.is_refrigerator else None,
        cop_carnot=carnot_cop(t_h, t_c) if t_h > t_c else None,
        details={"n_hot": model.n_hot, "n_cold": model.n_cold,
                 "gamma_h": model.gamma_h, "gamma_c": model.gamma_c, "eta": model.eta},
    )
