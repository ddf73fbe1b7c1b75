"""Refrigerator driven by Poisson white noise (random unitary kicks ``exp(i xi X)``).

Averaging the kicks over their arrival statistics splits the noise into a
coherent shift ``epsilon X`` and a dephasing ``-eta [X, [X, .]]``.  The shift
dresses the oscillators into normal modes

    A1 = a cos(theta) + b sin(theta),   A2 = b cos(theta) - a sin(theta)

with frequencies ``Omega_plus >= Omega_minus``, and the baths are written
in that dressed basis.  In the dressed basis the bare swap generator reads
``W = sin(2 theta) Z + cos(2 theta) X``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import PhysicsConstraintError
from .gaussian import cop_otto
from .moments import (N, Z, bath_fixed_point, dephasing_power, stationary_deviation,
                      stationary_moments, su2_moment_system, to_state, two_mode_balance)
from .thermo import (BathSpec, CurrentsReport, MomentState, OscillatorPair,
                     SteadyStateReport, bath_rate, carnot_cop, entropy_production,
                     planck_occupation)

Mode = Literal["full", "lowT"]


@dataclass(frozen=True)
class PoissonNoiseSpec:
    """Kicks at rate ``lambda_rate`` with impulses drawn from ``impulses``.

    ``impulses`` is a sequence of ``(xi, weight)`` pairs; continuous
    distributions must be discretized by the caller.
    """

    lambda_rate: float
    impulses: tuple[tuple[float, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "impulses",
                           tuple((float(x), float(w)) for x, w in self.impulses))
        if not self.lambda_rate >= 0:
            raise PhysicsConstraintError(f"lambda_rate must be >= 0, got {self.lambda_rate}")
        if not self.impulses:
            raise PhysicsConstraintError("impulse distribution is empty")
        weights = [w for _, w in self.impulses]
        if any(not w > 0 for w in weights):
            raise PhysicsConstraintError("impulse weights must be > 0")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise PhysicsConstraintError(f"impulse weights sum to {math.fsum(weights)}, not 1")

    @classmethod
    def delta(cls, lambda_rate: float, xi0: float) -> "PoissonNoiseSpec":
        return cls(lambda_rate, ((xi0, 1.0),))


@dataclass(frozen=True)
class KickMoments:
    epsilon: float
    eta: float


@dataclass(frozen=True)
class DressedFrame:
    omega_plus: float
    omega_minus: float
    theta: float
    cos2_theta: float

    @property
    def sin2_theta(self) -> float:
        return math.sin(self.theta) ** 2

    @property
    def gap(self) -> float:
        return self.omega_plus - self.omega_minus

    @property
    def w(self) -> tuple[float, float, float]:
        """Bare swap generator in dressed ``(X, Y, Z)`` components."""
        return math.cos(2 * self.theta), 0.0, math.sin(2 * self.theta)


@dataclass(frozen=True)
class BathRates:
    """Dressed-channel rates of one bath.

    ``gamma1``/``gamma2`` absorb into/emit from ``A1`` and ``gamma3``/``gamma4``
    do the same for ``A2``.
    """

    gamma1: float
    gamma2: float
    gamma3: float
    gamma4: float
    zeta_plus: float
    zeta_minus: float
    n_plus: float
    n_minus: float
    temperature: float


@dataclass(frozen=True)
class DressedRateSet:
    hot: BathRates
    cold: BathRates


def kick_moments(noise: PoissonNoiseSpec) -> KickMoments:
    """Coherent shift and dephasing strength of the averaged kick map."""
    lam = noise.lambda_rate
    eps = -0.5 * lam * math.fsum(w * (2 * x - math.sin(2 * x)) for x, w in noise.impulses)
    eta = 0.25 * lam * math.fsum(w * (1 - math.cos(2 * x)) for x, w in noise.impulses)
    return KickMoments(eps, eta)


def dressed_frame(pair: OscillatorPair, epsilon: float) -> DressedFrame:
    """Normal modes of ``omega_h a'a + omega_c b'b + epsilon X``."""
    det = pair.omega_h * pair.omega_c - epsilon ** 2
    if not det > 0:
        raise PhysicsConstraintError(
            f"dressed frequency would be non-positive: need omega_h*omega_c > epsilon^2, "
            f"got epsilon^2={epsilon ** 2:.6g} >= omega_h*omega_c={pair.omega_h * pair.omega_c:.6g}")
    mean = 0.5 * (pair.omega_h + pair.omega_c)
    radius = math.hypot(0.5 * (pair.omega_h - pair.omega_c), epsilon)
    omega_plus = mean + radius
    omega_minus = det / omega_plus
    theta = 0.5 * math.atan2(2 * epsilon, pair.omega_h - pair.omega_c)
    return DressedFrame(omega_plus, omega_minus, theta, math.cos(theta) ** 2)


def _bath_rates(omega_plus, omega_minus, temperature, zeta_plus, zeta_minus) -> BathRates:
    n_p = planck_occupation(omega_plus, temperature)
    n_m = planck_occupation(omega_minus, temperature)
    return BathRates(
        gamma1=zeta_plus * n_p, gamma2=zeta_plus * (n_p + 1),
        gamma3=zeta_minus * n_m, gamma4=zeta_minus * (n_m + 1),
        zeta_plus=zeta_plus, zeta_minus=zeta_minus, n_plus=n_p, n_minus=n_m,
        temperature=temperature)


def dressed_rates(frame: DressedFrame, hot: BathSpec, cold: BathSpec,
                  zeta: float | None = None) -> DressedRateSet:
    """Detailed-balanced dressed rates.

    By default ``zeta = kappa * Omega**d`` per bath and mode; a constant
    ``zeta`` overrides all four transport coefficients.
    """
    out = []
    for bath in (hot, cold):
        if zeta is None:
            zp, zm = bath_rate(frame.omega_plus, bath), bath_rate(frame.omega_minus, bath)
        else:
            if not zeta > 0:
                raise PhysicsConstraintError(f"zeta must be > 0, got {zeta}")
            zp = zm = zeta
        out.append(_bath_rates(frame.omega_plus, frame.omega_minus, bath.temperature, zp, zm))
    return DressedRateSet(*out)


def channel_mix(frame: DressedFrame, rates: DressedRateSet):
    """Total damping and thermal source of each dressed mode."""
    c2, s2 = frame.cos2_theta, frame.sin2_theta
    h, c = rates.hot, rates.cold
    zeta1 = c2 * h.zeta_plus + s2 * c.zeta_plus
    zeta2 = s2 * h.zeta_minus + c2 * c.zeta_minus
    s1 = c2 * h.gamma1 + s2 * c.gamma1
    s2_ = s2 * h.gamma3 + c2 * c.gamma3
    return zeta1, zeta2, s1, s2_


def moment_generator_full(frame: DressedFrame, rates: DressedRateSet,
                          kick: KickMoments) -> tuple[np.ndarray, np.ndarray]:
    """4x4 system for the dressed ``(x, y, z, n)`` with both channels of each bath."""
    zeta1, zeta2, s1, s2 = channel_mix(frame, rates)
    return su2_moment_system(frame.gap, zeta1, zeta2, s1, s2, kick.eta, frame.w)


def moment_generator_lowT(frame: DressedFrame, rates: DressedRateSet,
                          kick: KickMoments) -> tuple[np.ndarray, np.ndarray]:
    """Two-moment ``(n, z)`` system keeping only ``A1``-hot and ``A2``-cold channels."""
    zp_h, zm_c = rates.hot.zeta_plus, rates.cold.zeta_minus
    src_h = zp_h * rates.hot.n_plus
    src_c = zm_c * rates.cold.n_minus
    A = np.array([
        [-0.5 * (zp_h + zm_c), -0.5 * (zp_h - zm_c)],
        [-0.5 * (zp_h - zm_c), -0.5 * (zp_h + zm_c) - 4.0 * kick.eta],
    ])
    b = np.array([src_h + src_c, src_h - src_c])
    return A, b


def steady_state(frame: DressedFrame, rates: DressedRateSet, kick: KickMoments,
                 mode: Mode = "full") -> MomentState:
    if mode == "full":
        zeta1, zeta2, s1, s2 = channel_mix(frame, rates)
        A, _ = su2_moment_system(frame.gap, zeta1, zeta2, s1, s2, kick.eta, frame.w)
        fixed = bath_fixed_point(zeta1, zeta2, s1, s2)
        return to_state(stationary_moments(A, kick.eta, frame.w, fixed))
    if mode == "lowT":
        # only (n, z) is meaningful here; the (x, y) sector decouples
        z, d1, d2 = two_mode_balance(rates.hot.n_plus, rates.cold.n_minus,
                                     rates.hot.zeta_plus, rates.cold.zeta_minus, kick.eta)
        return MomentState(0.0, 0.0, z, rates.hot.n_plus + rates.cold.n_minus + d1 + d2)
    raise ValueError(f"unknown mode {mode!r}; expected 'full' or 'lowT'")


def steady_currents(frame: DressedFrame, rates: DressedRateSet, kick: KickMoments,
                    mode: Mode = "full") -> CurrentsReport:
    """``<L_k(H_s)>`` for each generator at the stationary moments."""
    state = steady_state(frame, rates, kick, mode)
    h, c = rates.hot, rates.cold
    op, om = frame.omega_plus, frame.omega_minus
    if mode == "full":
        c2, s2 = frame.cos2_theta, frame.sin2_theta
        zeta1, zeta2, src1, src2 = channel_mix(frame, rates)
        A, _ = su2_moment_system(frame.gap, zeta1, zeta2, src1, src2, kick.eta, frame.w)
        dev = stationary_deviation(A, kick.eta, frame.w,
                                   bath_fixed_point(zeta1, zeta2, src1, src2))
        d1, d2 = 0.5 * (dev[N] + dev[Z]), 0.5 * (dev[N] - dev[Z])
        # each bath's offset from the bath-only fixed point, written without cancellation
        gap1 = (h.n_plus - c.n_plus) / zeta1
        gap2 = (h.n_minus - c.n_minus) / zeta2
        j_hot = (op * c2 * h.zeta_plus * (s2 * c.zeta_plus * gap1 - d1)
                 + om * s2 * h.zeta_minus * (c2 * c.zeta_minus * gap2 - d2))
        j_cold = (op * s2 * c.zeta_plus * (-c2 * h.zeta_plus * gap1 - d1)
                  + om * c2 * c.zeta_minus * (-s2 * h.zeta_minus * gap2 - d2))
        w = frame.w
    else:
        _, d1, d2 = two_mode_balance(h.n_plus, c.n_minus, h.zeta_plus, c.zeta_minus, kick.eta)
        j_hot = -op * h.zeta_plus * d1
        j_cold = -om * c.zeta_minus * d2
        w = (1.0, 0.0, 0.0)
    j_noise = dephasing_power(kick.eta, frame.gap, w, state)
    return CurrentsReport(j_hot, j_cold, j_noise)


def cop_poisson(frame: DressedFrame) -> float:
    if not frame.omega_plus > frame.omega_minus:
        raise PhysicsConstraintError("degenerate dressed frame: Omega_plus == Omega_minus")
    return frame.omega_minus / frame.gap


def closed_form_jc(frame: DressedFrame, rates: DressedRateSet, kick: KickMoments) -> float:
    """Low-temperature cooling power
    ``Omega_- (N_-^c - N_+^h) / (1/(2 eta) + 1/zeta_+^h + 1/zeta_-^c)``."""
    if kick.eta == 0:
        return 0.0
    denom = 0.5 / kick.eta + 1.0 / rates.hot.zeta_plus + 1.0 / rates.cold.zeta_minus
    return frame.omega_minus * (rates.cold.n_minus - rates.hot.n_plus) / denom


@dataclass(frozen=True)
class PoissonModel:
    pair: OscillatorPair
    hot: BathSpec
    cold: BathSpec
    noise: PoissonNoiseSpec
    zeta: float | None = None
    mode: Mode = "full"

    @property
    def kick(self) -> KickMoments:
        return kick_moments(self.noise)

    @property
    def frame(self) -> DressedFrame:
        return dressed_frame(self.pair, self.kick.epsilon)

    @property
    def rates(self) -> DressedRateSet:
        return dressed_rates(self.frame, self.hot, self.cold, self.zeta)


def make_model(omega_h, omega_c, t_hot, t_cold, lambda_rate, xi0=None, impulses=None,
               zeta=None, kappa_h=0.1, kappa_c=0.1, d_h=1, d_c=1, mode="full") -> PoissonModel:
    if (xi0 is None) == (impulses is None):
        raise PhysicsConstraintError("give exactly one of xi0 or impulses")
    noise = (PoissonNoiseSpec.delta(lambda_rate, xi0) if impulses is None
             else PoissonNoiseSpec(lambda_rate, tuple(map(tuple, impulses))))
    return PoissonModel(
        OscillatorPair(omega_h, omega_c),
        BathSpec(t_hot, d_h, kappa_h, "hot"),
        BathSpec(t_cold, d_c, kappa_c, "cold"),
        noise, zeta, mode)


def evaluate(model: PoissonModel) -> SteadyStateReport:
    kick = model.kick
    frame = dressed_frame(model.pair, kick.epsilon)
    rates = dressed_rates(frame, model.hot, model.cold, model.zeta)
    state = steady_state(frame, rates, kick, model.mode)
    currents = steady_currents(frame, rates, kick, model.mode)
    t_h, t_c = model.hot.temperature, model.cold.temperature
    entropy = entropy_production(currents, t_h, t_c)
    cop = None
    if currents.j_cold > 0 and currents.j_noise > 0:
        cop = currents.j_cold / currents.j_noise
    return SteadyStateReport(
        moments=state,
        currents=currents,
        entropy=entropy,
        cop=cop,
        cop_otto=cop_otto(model.pair) if model.pair.is_refrigerator else None,
        cop_carnot=carnot_cop(t_h, t_c) if t_h > t_c else None,
        details={
            "epsilon": kick.epsilon, "eta": kick.eta,
            "omega_plus": frame.omega_plus, "omega_minus": frame.omega_minus,
            "theta": frame.theta, "cos2_theta": frame.cos2_theta,
            "cop_dressed": cop_poisson(frame) if frame.gap > 0 else None,
            "jc_closed_form": closed_form_jc(frame, rates, kick),
            "mode": model.mode,
        },
    )
