"""Master-equation generators on the truncated two-mode Fock space.

Every generator is stored as labelled lists of terms ``coef * A @ rho @ B``
(``None`` standing for the identity).  That single representation gives both
the action on a density matrix and the dense superoperator restricted to the
sector where ket and bra carry the same total excitation number, which is
where all stationary states of these number-conserving models live.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import ConfigError, PhysicsConstraintError
from ..poisson import DressedFrame, DressedRateSet, PoissonNoiseSpec, dressed_frame, kick_moments
from ..thermo import OscillatorPair
from .fock import DimensionCapError, ModeOperators

Term = tuple[complex, "np.ndarray | None", "np.ndarray | None"]


# --- noise variants -------------------------------------------------------------

@dataclass(frozen=True)
class GaussianNoise:
    eta: float


@dataclass(frozen=True)
class PoissonKick:
    """Averaged kick map ``lambda (sum_j p_j U_j rho U_j' - rho)`` plus the mean-impulse drift."""

    lambda_rate: float
    impulses: tuple[tuple[float, float], ...]

    @classmethod
    def delta(cls, lambda_rate: float, xi0: float) -> "PoissonKick":
        return cls(lambda_rate, ((xi0, 1.0),))

    @property
    def spec(self) -> PoissonNoiseSpec:
        return PoissonNoiseSpec(self.lambda_rate, self.impulses)


@dataclass(frozen=True)
class PoissonDressed:
    eta: float
    epsilon: float


@dataclass(frozen=True)
class WorkBathFiniteT:
    """Thermal work bath exchanging quanta through ``a b'`` / ``a' b``."""

    gamma_w: float
    n_w: float


# --- bath forms ---------------------------------------------------------------------

@dataclass(frozen=True)
class BareBaths:
    gamma_h: float
    gamma_c: float
    n_h: float
    n_c: float


@dataclass(frozen=True)
class DressedBaths:
    frame: DressedFrame
    rates: DressedRateSet


# --- term builders ------------------------------------------------------------------

def lindblad(rate: float, L: np.ndarray) -> list[Term]:
    Ld = L.conj().T
    LdL = Ld @ L
    return [(rate, L, Ld), (-0.5 * rate, LdL, None), (-0.5 * rate, None, LdL)]


def double_commutator(eta: float, A: np.ndarray) -> list[Term]:
    """``-eta [A, [A, rho]]`` for Hermitian ``A``."""
    AA = A @ A
    return [(-eta, AA, None), (2 * eta, A, A), (-eta, None, AA)]


def commutator(H: np.ndarray) -> list[Term]:
    """``-i [H, rho]``."""
    return [(-1j, H, None), (1j, None, H)]


def unitary_mix(rate: float, unitaries: list[tuple[float, np.ndarray]]) -> list[Term]:
    terms: list[Term] = [(rate * p, U, U.conj().T) for p, U in unitaries]
    terms.append((-rate, None, None))
    return terms


def _apply_terms(terms: list[Term], rho: np.ndarray) -> np.ndarray:
    out = np.zeros(rho.shape, dtype=complex)
    for coef, A, B in terms:
        left = rho if A is None else A @ rho
        out += coef * (left if B is None else left @ B)
    return out


@dataclass(eq=False)
class Generator:
    """Lindblad-type generator split into labelled parts.

    ``hamiltonian`` drives the coherent part and is also the energy operator
    used for the heat currents ``Tr(H part_k(rho))``.
    """

    ops: ModeOperators
    hamiltonian: np.ndarray
    parts: dict[str, list[Term]]
    rates: list[float] = field(default_factory=list)

    @property
    def all_terms(self) -> list[Term]:
        terms = commutator(self.hamiltonian)
        for part in self.parts.values():
            terms = terms + part
        return terms

    def apply(self, rho: np.ndarray, part: str | None = None) -> np.ndarray:
        terms = self.all_terms if part is None else self.parts[part]
        return _apply_terms(terms, rho)

    def heisenberg(self, O: np.ndarray, part: str | None = None) -> np.ndarray:
        """Adjoint action ``L'(O)`` defined by ``Tr(O L(rho)) = Tr(L'(O) rho)``."""
        terms = self.all_terms if part is None else self.parts[part]
        out = np.zeros(O.shape, dtype=complex)
        for coef, A, B in terms:
            # Tr(O A rho B) = Tr(B O A rho)
            left = O if B is None else B @ O
            out += coef * (left if A is None else left @ A)
        return out

    @property
    def sector(self) -> tuple[np.ndarray, np.ndarray]:
        """Index pairs ``(i, j)`` with equal total excitation number."""
        exc = self.ops.excitation
        I, J = np.nonzero(exc[:, None] == exc[None, :])
        return I, J

    def superoperator(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense matrix of the generator on the equal-excitation sector.

        Returns ``(M, I, J)``; the sector vector is ``rho[I, J]``.
        """
        I, J = self.sector
        size = len(I)
        cap = self.ops.config.max_liouville_dim
        if size > cap:
            raise DimensionCapError(
                f"stationary sector has {size} elements, above max_liouville_dim={cap}")
        same_i = I[:, None] == I[None, :]
        same_j = J[:, None] == J[None, :]
        M = np.zeros((size, size), dtype=complex)
        for coef, A, B in self.all_terms:
            # (A rho B)[I_p, J_p] = sum_q A[I_p, I_q] rho[I_q, J_q] B[J_q, J_p]
            left = same_i if A is None else A[np.ix_(I, I)]
            right = same_j if B is None else B[np.ix_(J, J)].T
            M += coef * (left * right)
        return M, I, J


# --- assembly -----------------------------------------------------------------------

def _free_hamiltonian(ops: ModeOperators, pair: OscillatorPair) -> np.ndarray:
    return pair.omega_h * ops.number_a + pair.omega_c * ops.number_b


def _bare_bath_parts(ops: ModeOperators, baths: BareBaths) -> dict[str, list[Term]]:
    a, b = ops.a, ops.b
    return {
        "hot": (lindblad(baths.gamma_h * (baths.n_h + 1), a)
                + lindblad(baths.gamma_h * baths.n_h, a.T)),
        "cold": (lindblad(baths.gamma_c * (baths.n_c + 1), b)
                 + lindblad(baths.gamma_c * baths.n_c, b.T)),
    }


def _dressed_bath_parts(ops: ModeOperators, baths: DressedBaths) -> dict[str, list[Term]]:
    frame, rates = baths.frame, baths.rates
    A1, A2 = ops.dressed_modes(frame.theta)
    c2, s2 = frame.cos2_theta, frame.sin2_theta
    parts = {}
    for label, r, w1, w2 in (("hot", rates.hot, c2, s2), ("cold", rates.cold, s2, c2)):
        parts[label] = (lindblad(w1 * r.gamma2, A1) + lindblad(w1 * r.gamma1, A1.T)
                        + lindblad(w2 * r.gamma4, A2) + lindblad(w2 * r.gamma3, A2.T))
    return parts


def kick_unitary(X: np.ndarray, xi: float) -> np.ndarray:
    """``exp(-i xi X)`` by scaling-and-squaring."""
    return scipy.linalg.expm(-1j * xi * X)


def build_generator(ops: ModeOperators, pair: OscillatorPair, variant,
                    baths: BareBaths | DressedBaths) -> Generator:
    """Assemble the full generator for one noise variant and bath form."""
    X = ops.su2()["X"]
    H0 = _free_hamiltonian(ops, pair)

    if isinstance(variant, (GaussianNoise, WorkBathFiniteT)):
        if not isinstance(baths, BareBaths):
            raise ConfigError(f"{type(variant).__name__} needs bare baths")
        parts = _bare_bath_parts(ops, baths)
        rates = [baths.gamma_h, baths.gamma_c]
        if isinstance(variant, GaussianNoise):
            parts["noise"] = double_commutator(variant.eta, X)
            rates.append(variant.eta)
        else:
            swap_down = ops.a @ ops.b.T   # moves a quantum from a to b
            parts["noise"] = (lindblad(variant.gamma_w * (variant.n_w + 1), swap_down)
                              + lindblad(variant.gamma_w * variant.n_w, swap_down.T))
            rates.append(variant.gamma_w * max(variant.n_w, 1.0))
        return Generator(ops, H0, parts, [r for r in rates if r > 0])

    if isinstance(variant, (PoissonKick, PoissonDressed)):
        if not isinstance(baths, DressedBaths):
            raise ConfigError(f"{type(variant).__name__} needs dressed baths")
        if isinstance(variant, PoissonKick):
            kick = kick_moments(variant.spec)
            epsilon, eta = kick.epsilon, kick.eta
        else:
            epsilon, eta = variant.epsilon, variant.eta
        expected = dressed_frame(pair, epsilon)
        if abs(expected.theta - baths.frame.theta) > 1e-12 or abs(
                expected.omega_plus - baths.frame.omega_plus) > 1e-12 * expected.omega_plus:
            raise PhysicsConstraintError("dressed bath frame does not match the noise shift epsilon")
        H_s = H0 + epsilon * X
        parts = _dressed_bath_parts(ops, baths)
        if isinstance(variant, PoissonDressed):
            parts["noise"] = double_commutator(eta, X)
        else:
            lam = variant.lambda_rate
            mean_xi = sum(p * xi for xi, p in variant.impulses)
            # dynamics run under H0 with drift + kicks; relative to H_s that is
            # an extra coherent term -i[-(epsilon + lam <xi>) X, rho]
            unitaries = [(p, kick_unitary(X, xi)) for xi, p in variant.impulses]
            parts["noise"] = (commutator(-(epsilon + lam * mean_xi) * X)
                              + unitary_mix(lam, unitaries))
        r = baths.rates
        rates = [r.hot.zeta_plus, r.hot.zeta_minus, r.cold.zeta_plus, r.cold.zeta_minus, eta]
        return Generator(ops, H_s, parts, [x for x in rates if x > 0])

    raise ConfigError(f"unknown generator variant {variant!r}")
