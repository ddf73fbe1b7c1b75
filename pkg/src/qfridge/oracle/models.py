"""Oracle generators built directly from the model dataclasses."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import PhysicsConstraintError
from ..gaussian import GaussianModel
from ..poisson import PoissonModel, dressed_frame, dressed_rates, kick_moments, steady_state
from .fock import FockConfig, build_mode_operators, shells_for_occupation
from .generator import (BareBaths, DressedBaths, GaussianNoise, Generator, PoissonDressed,
                        PoissonKick, WorkBathFiniteT, build_generator)
from .solve import OracleResult, solve_oracle


def auto_config(n_a: float, n_b: float, edge_tol: float = 1e-10, **kw) -> FockConfig:
    """Shell truncation whose top shell would hold ``< edge_tol`` for thermal modes.

    The transport steady state is not a product of thermal states, so callers
    pass upper bounds on the occupations and check the solved edge population.
    """
    return FockConfig.shells(shells_for_occupation(n_a, n_b, edge_tol), **kw)


def _bare(model: GaussianModel) -> BareBaths:
    return BareBaths(model.gamma_h, model.gamma_c, model.n_hot, model.n_cold)


def gaussian_generator(model: GaussianModel, config: FockConfig) -> Generator:
    return build_generator(build_mode_operators(config), model.pair,
                           GaussianNoise(model.eta), _bare(model))


def work_bath_generator(model: GaussianModel, gamma_w: float, n_w: float,
                        config: FockConfig) -> Generator:
    """Same baths as ``model`` with the noise replaced by a finite-temperature work bath."""
    return build_generator(build_mode_operators(config), model.pair,
                           WorkBathFiniteT(gamma_w, n_w), _bare(model))


def poisson_generator(model: PoissonModel, config: FockConfig,
                      variant: Literal["kick", "dressed"] = "dressed") -> Generator:
    kick = kick_moments(model.noise)
    frame = dressed_frame(model.pair, kick.epsilon)
    rates = dressed_rates(frame, model.hot, model.cold, model.zeta)
    if variant == "kick":
        noise = PoissonKick(model.noise.lambda_rate, model.noise.impulses)
    elif variant == "dressed":
        noise = PoissonDressed(kick.eta, kick.epsilon)
    else:
        raise ValueError(f"unknown Poisson variant {variant!r}")
    return build_generator(build_mode_operators(config), model.pair, noise,
                           DressedBaths(frame, rates))


def solve_gaussian(model: GaussianModel, config: FockConfig | None = None) -> OracleResult:
    config = config or auto_config(model.n_hot, model.n_cold)
    return solve_oracle(gaussian_generator(model, config))


def poisson_auto_config(model: PoissonModel, edge_tol: float = 1e-10, margin: float = 1.25,
                        **kw) -> FockConfig:
    """Shell truncation sized from the dressed-mode populations of the moment model.

    ``margin`` inflates both populations; the solved edge population is the
    actual check.
    """
    n1, n2 = steady_state(model.frame, model.rates, model.kick, "full").populations
    return auto_config(margin * max(n1, 0.0), margin * max(n2, 0.0), edge_tol, **kw)


def solve_poisson(model: PoissonModel, config: FockConfig | None = None,
                  variant: Literal["kick", "dressed"] = "dressed") -> OracleResult:
    """Oracle steady state; moments are reported in the dressed basis."""
    frame = model.frame
    if config is None:
        config = poisson_auto_config(model)
    return solve_oracle(poisson_generator(model, config, variant), theta=frame.theta)


@dataclass(frozen=True)
class SingularBathRow:
    n_w: float
    gamma_w: float
    j_cold: float
    deviation: float


@dataclass(frozen=True)
class SingularBathReport:
    reference_j_cold: float
    rows: tuple[SingularBathRow, ...]
    extrapolated_j_cold: float
    extrapolated_deviation: float
    fit_n_w: tuple[float, ...]

    @property
    def monotone(self) -> bool:
        devs = [r.deviation for r in self.rows]
        return all(b < a for a, b in zip(devs, devs[1:]))

    def extrapolate(self, n_w_values: Sequence[float]) -> float:
        """Extrapolation to ``1/N_w -> 0`` from a chosen subset of the ladder."""
        use = [r for r in self.rows if r.n_w in set(n_w_values) and r.n_w > 0]
        if len(use) < 2:
            raise ValueError("need at least two positive N_w values to extrapolate")
        return _extrapolate_to_zero(np.array([1.0 / r.n_w for r in use]),
                                    np.array([r.j_cold for r in use]))


def _extrapolate_to_zero(h: np.ndarray, values: np.ndarray) -> float:
    """Polynomial (Richardson/Neville) extrapolation of ``values(h)`` to ``h = 0``."""
    coeffs = np.polyfit(h, values, len(h) - 1)
    return float(coeffs[-1])


def singular_bath_limit_check(model: GaussianModel,
                              n_w_ladder: Sequence[float] = (1, 10, 100, 1000),
                              config: FockConfig | None = None,
                              fit_points: int = 3) -> SingularBathReport:
    """Compare a finite-temperature work bath with the Gaussian noise it approaches.

    For each ``N_w`` the work-bath rate is ``Gamma_w = 2 eta / N_w`` so that the
    equivalent noise strength ``Gamma_w N_w / 2`` stays at ``model.eta``
    (``N_w = 0`` keeps ``Gamma_w = 2 eta``: a pure one-way channel).
    The extrapolated current is a polynomial in ``1/N_w`` through the
    ``fit_points`` largest ``N_w`` of the ladder.
    """
    if not model.eta > 0:
        raise PhysicsConstraintError("singular-bath check needs eta > 0")
    config = config or auto_config(model.n_hot, model.n_cold, edge_tol=1e-8)
    ref = solve_oracle(gaussian_generator(model, config)).currents.j_cold
    rows = []
    for n_w in n_w_ladder:
        gamma_w = 2.0 * model.eta / n_w if n_w > 0 else 2.0 * model.eta
        jc = solve_oracle(work_bath_generator(model, gamma_w, n_w, config)).currents.j_cold
        rows.append(SingularBathRow(n_w, gamma_w, jc, abs(jc - ref) / abs(ref)))
    fit = tuple(sorted(r.n_w for r in rows if r.n_w > 0)[-fit_points:])
    partial = SingularBathReport(ref, tuple(rows), float("nan"), float("nan"), fit)
    extrap = partial.extrapolate(fit) if len(fit) >= 2 else float("nan")
    return SingularBathReport(ref, tuple(rows), extrap, abs(extrap - ref) / abs(ref), fit)
