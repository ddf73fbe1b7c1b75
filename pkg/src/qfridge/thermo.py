"""Shared physical types, Planck occupations, spectral rates and law audits.

Natural units are used throughout (hbar = k_B = 1), so frequencies,
temperatures and energies share one unit.  Every heat current is counted
positive when energy flows from its reservoir *into* the working medium,
which makes the first law read ``j_hot + j_cold + j_noise = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

from .errors import PhysicsConstraintError

#: default relative tolerance for first/second law audits
LAW_RTOL = 1e-10


@dataclass(frozen=True)
class BathSpec:
    """One thermal reservoir.

    The coupling to a mode of frequency ``omega`` is ``coupling_kappa * omega**dimension_d``.
    """

    temperature: float
    dimension_d: int = 1
    coupling_kappa: float = 0.1
    label: Literal["hot", "cold"] = "hot"

    def __post_init__(self):
        if not self.temperature > 0:
            raise PhysicsConstraintError(
                f"{self.label} bath temperature must be > 0, got {self.temperature}")
        if self.dimension_d not in (1, 2, 3):
            raise PhysicsConstraintError(
                f"bath dimension must be 1, 2 or 3, got {self.dimension_d}")
        if not self.coupling_kappa > 0:
            raise PhysicsConstraintError(
                f"coupling_kappa must be > 0, got {self.coupling_kappa}")
        if self.label not in ("hot", "cold"):
            raise PhysicsConstraintError(f"unknown bath label {self.label!r}")


@dataclass(frozen=True)
class OscillatorPair:
    """Frequencies of the hot-side oscillator ``a`` and cold-side oscillator ``b``."""

    omega_h: float
    omega_c: float

    def __post_init__(self):
        if not (self.omega_h > 0 and self.omega_c > 0):
            raise PhysicsConstraintError(
                f"oscillator frequencies must be > 0, got omega_h={self.omega_h}, "
                f"omega_c={self.omega_c}")

    @property
    def is_refrigerator(self) -> bool:
        return self.omega_h > self.omega_c


@dataclass(frozen=True)
class CurrentsReport:
    """Steady-state heat currents, each directed into the working medium."""

    j_hot: float
    j_cold: float
    j_noise: float
    first_law_residual: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "first_law_residual", self.j_hot + self.j_cold + self.j_noise)

    @property
    def scale(self) -> float:
        return max(abs(self.j_hot), abs(self.j_cold), abs(self.j_noise))

    def first_law_ok(self, rtol: float = LAW_RTOL, floor: float = 1e-300) -> bool:
        return abs(self.first_law_residual) <= rtol * max(self.scale, floor)


@dataclass(frozen=True)
class EntropyReport:
    sigma_hot: float
    sigma_cold: float
    sigma_total: float
    # set when sigma_total < -tolerance; means the generator is thermodynamically inconsistent
    violation: bool = False


@dataclass(frozen=True)
class MomentState:
    """Expectation values of the SU(2) set built from two bosonic modes."""

    x: float
    y: float
    z: float
    n: float

    @property
    def populations(self) -> tuple[float, float]:
        """(first-mode, second-mode) occupations ``((n+z)/2, (n-z)/2)``."""
        return 0.5 * (self.n + self.z), 0.5 * (self.n - self.z)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return self.x, self.y, self.z, self.n


@dataclass(frozen=True)
class SteadyStateReport:
    """Everything reported for one stationary operating point."""

    moments: MomentState
    currents: CurrentsReport
    entropy: EntropyReport
    cop: float | None
    cop_otto: float | None
    cop_carnot: float | None
    details: dict = field(default_factory=dict)

    @property
    def populations(self) -> tuple[float, float]:
        return self.moments.populations

    @property
    def is_cooling(self) -> bool:
        return self.currents.j_cold > 0


def planck_occupation(omega: float, temperature: float) -> float:
    """Bose-Einstein occupation ``1/(exp(omega/T) - 1)``; zero at ``T = 0``."""
    if not omega > 0:
        raise PhysicsConstraintError(f"frequency must be > 0, got {omega}")
    if temperature < 0:
        raise PhysicsConstraintError(f"temperature must be >= 0, got {temperature}")
    if temperature == 0:
        return 0.0
    x = omega / temperature
    # e^{-x}/(1-e^{-x}) never overflows and keeps full precision as x -> 0
    return math.exp(-x) / -math.expm1(-x)


def bath_rate(omega: float, bath: BathSpec) -> float:
    """Spectral coupling rate ``kappa * omega**d`` of ``bath`` at frequency ``omega``."""
    if not omega > 0:
        raise PhysicsConstraintError(f"frequency must be > 0, got {omega}")
    return bath.coupling_kappa * omega ** bath.dimension_d


def cooling_window(pair: OscillatorPair, t_hot: float, t_cold: float) -> bool:
    """True when the cold oscillator is hotter in occupation than the hot one."""
    if not (t_hot > 0 and t_cold > 0):
        raise PhysicsConstraintError("temperatures must be > 0")
    return pair.omega_h / t_hot > pair.omega_c / t_cold


def carnot_cop(t_hot: float, t_cold: float) -> float:
    if not t_hot > t_cold > 0:
        raise PhysicsConstraintError(
            f"Carnot COP needs t_hot > t_cold > 0, got {t_hot}, {t_cold}")
    return t_cold / (t_hot - t_cold)


def entropy_production(currents: CurrentsReport, t_hot: float, t_cold: float,
                       tol: float = 1e-12) -> EntropyReport:
    """Entropy flux ``-J_k/T_k`` into each thermal bath.

    The noise source is a singular (infinite temperature) reservoir and
    contributes nothing.  A total below ``-tol`` is flagged, not hidden.
    """
    if not (t_hot > 0 and t_cold > 0):
        raise PhysicsConstraintError(
            "entropy production needs strictly positive bath temperatures")
    s_hot = -currents.j_hot / t_hot
    s_cold = -currents.j_cold / t_cold
    total = s_hot + s_cold
    return EntropyReport(s_hot, s_cold, total, violation=total < -tol)


def check_cop_chain(cop_machine: float, cop_otto: float, cop_carnot: float,
                    tol: float = 1e-10) -> bool:
    """True iff ``cop_machine <= cop_otto <= cop_carnot`` up to ``tol``."""
    values = (cop_machine, cop_otto, cop_carnot)
    if not all(math.isfinite(v) and v >= 0 for v in values):
        raise ValueError(f"COP values must be finite and >= 0, got {values}")
    return cop_machine <= cop_otto + tol and cop_otto <= cop_carnot + tol
