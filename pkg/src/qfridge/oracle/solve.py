"""Stationary states, currents and convergence checks for oracle generators."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
import scipy.linalg
from scipy.linalg.lapack import zgecon

from ..errors import ConvergenceError, DegenerateKernelError
from ..thermo import CurrentsReport, MomentState
from .fock import FockConfig
from .generator import Generator

logger = logging.getLogger(__name__)

#: reciprocal condition number below which the direct null-space solve is distrusted
RCOND_FLOOR = 1e-13


@dataclass(frozen=True, eq=False)
class StationaryDensity:
    rho: np.ndarray
    method: str
    trace_error: float
    hermiticity_error: float
    min_eigenvalue: float
    residual: float
    edge_population: float

    def expect(self, O: np.ndarray) -> float:
        return float(np.real(np.trace(O @ self.rho)))


def _to_matrix(vec: np.ndarray, I: np.ndarray, J: np.ndarray, dim: int) -> np.ndarray:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[I, J] = vec
    return rho


def _nullspace_solve(M: np.ndarray, diag: np.ndarray) -> tuple[np.ndarray, float]:
    # trace preservation makes the diagonal rows linearly dependent, so one of
    # them can be swapped for the normalization condition
    row = int(np.flatnonzero(diag)[0])
    K = M.copy()
    K[row, :] = diag.astype(complex)
    rhs = np.zeros(len(M), dtype=complex)
    rhs[row] = 1.0
    anorm = np.linalg.norm(K, 1)
    lu, piv = scipy.linalg.lu_factor(K, check_finite=False)
    rcond, _ = zgecon(lu, anorm, norm="1")
    if not rcond > RCOND_FLOOR:
        return None, float(rcond)
    return scipy.linalg.lu_solve((lu, piv), rhs), float(rcond)


def _propagate(M: np.ndarray, start: np.ndarray, horizon: float, tol: float,
               max_doublings: int = 40) -> np.ndarray:
    P = scipy.linalg.expm(M * horizon)
    v = start
    for _ in range(max_doublings):
        nxt = P @ v
        if np.max(np.abs(nxt - v)) < tol:
            return nxt
        v = nxt
        P = P @ P
    raise ConvergenceError(
        f"long-time propagation did not settle within 2^{max_doublings} x {horizon:.3g}")


def stationary_density(gen: Generator,
                       method: Literal["auto", "nullspace", "propagate", "both"] = "auto",
                       tol: float = 1e-10) -> StationaryDensity:
    """Unique stationary state of ``gen``.

    The null space is found by an LU solve with one population equation
    replaced by the trace condition.  When that system is numerically
    singular, or on request, the state is obtained by propagating two
    different initial states to long times; if they end up apart the kernel
    is degenerate and :class:`DegenerateKernelError` is raised.
    """
    M, I, J = gen.superoperator()
    dim = gen.ops.dim
    diag = I == J

    vec = None
    used = method
    if method in ("auto", "nullspace", "both"):
        vec, rcond = _nullspace_solve(M, diag)
        if vec is None and method == "nullspace":
            raise DegenerateKernelError(
                f"stationary system is singular (rcond={rcond:.2e}); kernel is not one-dimensional")
        if vec is None:
            logger.info("null-space solve ill-conditioned (rcond=%.2e); propagating", rcond)
        used = "nullspace"

    if vec is None or method in ("propagate", "both"):
        gap = min(gen.rates) if gen.rates else 0.0
        horizon = 20.0 / gap if gap > 0 else 1.0
        ground = np.zeros(len(M), dtype=complex)
        ground[int(np.flatnonzero(diag & (I == 0))[0])] = 1.0
        mixed = diag.astype(complex) / dim
        v1 = _propagate(M, ground, horizon, tol * 1e-2)
        v2 = _propagate(M, mixed, horizon, tol * 1e-2)
        if np.max(np.abs(v1 - v2)) > math.sqrt(tol):
            raise DegenerateKernelError(
                "different initial states relax to different stationary states; "
                "the generator has a decoupled sector")
        if vec is not None and np.max(np.abs(v1 - vec)) > math.sqrt(tol):
            raise ConvergenceError("null-space and propagation stationary states disagree")
        if vec is None:
            vec, used = v1, "propagate"

    rho = _to_matrix(vec, I, J, dim)
    trace = np.trace(rho)
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    rho = 0.5 * (rho + rho.conj().T) / trace.real
    residual = float(np.max(np.abs(M @ rho[I, J])))
    return StationaryDensity(
        rho=rho,
        method=used,
        trace_error=float(abs(trace - 1.0)),
        hermiticity_error=herm,
        min_eigenvalue=float(np.linalg.eigvalsh(rho)[0]),
        residual=residual,
        edge_population=float(np.real(np.diag(rho))[gen.ops.edge_mask].sum()),
    )


def currents_from_density(rho: np.ndarray, gen: Generator) -> CurrentsReport:
    """``J_k = Tr(H L_k(rho))`` for the hot, cold and noise parts."""
    H = gen.hamiltonian

    def flow(part):
        return float(np.real(np.trace(H @ gen.apply(rho, part))))

    return CurrentsReport(flow("hot"), flow("cold"), flow("noise"))


def su2_moments(rho: np.ndarray, gen: Generator, theta: float = 0.0) -> MomentState:
    ops = gen.ops.su2(theta)
    vals = [float(np.real(np.trace(ops[k] @ rho))) for k in "XYZN"]
    return MomentState(*vals)


def moment_derivatives(rho: np.ndarray, gen: Generator, theta: float = 0.0) -> np.ndarray:
    """``d/dt (<X>, <Y>, <Z>, <N>)`` under the full generator."""
    drho = gen.apply(rho)
    ops = gen.ops.su2(theta)
    return np.array([np.real(np.trace(ops[k] @ drho)) for k in "XYZN"])


@dataclass(frozen=True)
class OracleResult:
    density: StationaryDensity
    currents: CurrentsReport
    moments: MomentState


def solve_oracle(gen: Generator, theta: float = 0.0, method="auto") -> OracleResult:
    dens = stationary_density(gen, method)
    return OracleResult(dens, currents_from_density(dens.rho, gen),
                        su2_moments(dens.rho, gen, theta))


@dataclass
class TruncationStep:
    config: FockConfig
    currents: CurrentsReport
    rel_change: float | None
    edge_population: float
    moments: MomentState | None = None


@dataclass
class TruncationReport:
    steps: list[TruncationStep]
    converged: bool
    achieved_tol: float
    warnings: list[str] = field(default_factory=list)

    @property
    def final(self) -> TruncationStep:
        return self.steps[-1]


def _label(cfg: FockConfig) -> str:
    if cfg.max_excitation is not None:
        return f"shells<={cfg.max_excitation}"
    return f"levels {cfg.levels_a}x{cfg.levels_b}"


def truncation_sweep(build: Callable[[FockConfig], Generator], ladder: Sequence[FockConfig],
                     tol: float = 1e-6, edge_tol: float = 1e-8, strict: bool = False,
                     theta: float = 0.0) -> TruncationReport:
    """Oracle currents over increasing truncations with successive relative changes.

    SU(2) moments of each step are taken in the basis rotated by ``theta``.
    """
    steps: list[TruncationStep] = []
    warnings: list[str] = []
    prev = None
    for cfg in ladder:
        gen = build(cfg)
        dens = stationary_density(gen)
        cur = currents_from_density(dens.rho, gen)
        change = None
        if prev is not None:
            scale = max(cur.scale, 1e-300)
            change = max(abs(cur.j_hot - prev.j_hot), abs(cur.j_cold - prev.j_cold),
                         abs(cur.j_noise - prev.j_noise)) / scale
        if dens.edge_population > edge_tol:
            warnings.append(f"{_label(cfg)}: population {dens.edge_population:.2e} "
                            f"on the truncation edge exceeds {edge_tol:.0e}")
        steps.append(TruncationStep(cfg, cur, change, dens.edge_population,
                                    su2_moments(dens.rho, gen, theta)))
        prev = cur
    changes = [s.rel_change for s in steps if s.rel_change is not None]
    achieved = changes[-1] if changes else math.inf
    converged = achieved < tol and steps[-1].edge_population <= edge_tol
    for w in warnings:
        logger.warning(w)
    if strict and not converged:
        raise ConvergenceError(
            f"truncation ladder did not converge: last relative change {achieved:.2e} (tol {tol:.0e})")
    return TruncationReport(steps, converged, achieved, warnings)
