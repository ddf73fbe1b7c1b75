"""Ladder operators of two bosonic modes on a truncated Fock box."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from ..errors import ConfigError


class DimensionCapError(ConfigError):
    """Requested truncation exceeds the configured dimension cap."""


@dataclass(frozen=True)
class FockConfig:
    """Truncation of modes ``a`` (hot side) and ``b`` (cold side).

    Basis states are ``|n_a, n_b>`` with ``n_a < levels_a``, ``n_b < levels_b``
    and, when ``max_excitation`` is set, ``n_a + n_b <= max_excitation``.
    Cutting on total excitation keeps every retained shell complete, so the
    swap generator and its SU(2) partners stay exact on the whole space.

    ``max_dim`` caps the Hilbert dimension; ``max_liouville_dim`` caps the size
    of the dense stationary-sector superoperator that gets factorized.
    """

    levels_a: int
    levels_b: int
    convergence_tol: float = 1e-6
    max_excitation: int | None = None
    max_dim: int = 4096
    max_liouville_dim: int = 5000

    def __post_init__(self):
        if self.levels_a < 2 or self.levels_b < 2:
            raise ConfigError(f"need at least 2 levels per mode, got {self.levels_a}x{self.levels_b}")
        if self.max_excitation is not None and self.max_excitation < 1:
            raise ConfigError(f"max_excitation must be >= 1, got {self.max_excitation}")
        if self.dim > self.max_dim:
            raise DimensionCapError(
                f"Hilbert dimension {self.dim} exceeds cap max_dim={self.max_dim}")

    @classmethod
    def shells(cls, max_excitation: int, **kw) -> "FockConfig":
        """All states with at most ``max_excitation`` quanta in total."""
        return cls(max_excitation + 1, max_excitation + 1, max_excitation=max_excitation, **kw)

    @property
    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        na = np.repeat(np.arange(self.levels_a), self.levels_b)
        nb = np.tile(np.arange(self.levels_b), self.levels_a)
        if self.max_excitation is not None:
            keep = na + nb <= self.max_excitation
            na, nb = na[keep], nb[keep]
        return na, nb

    @property
    def dim(self) -> int:
        return len(self.occupations[0])


def levels_for_occupation(occupation: float, edge_tol: float = 1e-8, minimum: int = 2) -> int:
    """Levels needed so a thermal state of this occupation leaves ``< edge_tol`` on the top level."""
    if occupation <= 0:
        return minimum
    r = occupation / (occupation + 1.0)
    # population of level L-1 is (1 - r) r^(L-1)
    levels = 1 + math.ceil(math.log(edge_tol / (1.0 - r)) / math.log(r))
    return max(minimum, levels)


def shells_for_occupation(n_a: float, n_b: float, edge_tol: float = 1e-10) -> int:
    """Smallest total-excitation cut whose top shell holds ``< edge_tol`` for
    independent thermal modes of occupations ``n_a``, ``n_b``."""
    ra, rb = n_a / (n_a + 1.0), n_b / (n_b + 1.0)
    k = 1
    while True:
        j = np.arange(k + 1)
        top = (1 - ra) * (1 - rb) * np.sum(ra ** j * rb ** (k - j))
        if top < edge_tol:
            return k
        k += 1


def _lowering(levels: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, levels, dtype=float)), k=1)


@dataclass(frozen=True, eq=False)
class ModeOperators:
    config: FockConfig
    a: np.ndarray
    b: np.ndarray

    @property
    def dim(self) -> int:
        return self.config.dim

    @cached_property
    def identity(self) -> np.ndarray:
        return np.eye(self.dim)

    @cached_property
    def number_a(self) -> np.ndarray:
        return self.a.T @ self.a

    @cached_property
    def number_b(self) -> np.ndarray:
        return self.b.T @ self.b

    @cached_property
    def excitation(self) -> np.ndarray:
        """Total excitation number of every basis state."""
        na, nb = self.config.occupations
        return na + nb

    @cached_property
    def edge_mask(self) -> np.ndarray:
        """Basis states on the truncation edge (top level of a mode or top shell)."""
        cfg = self.config
        na, nb = cfg.occupations
        edge = (na == cfg.levels_a - 1) | (nb == cfg.levels_b - 1)
        if cfg.max_excitation is not None:
            edge |= na + nb == cfg.max_excitation
        return edge

    def su2(self, theta: float = 0.0) -> dict[str, np.ndarray]:
        """``X, Y, Z, N`` built from the modes rotated by ``theta`` (0 = bare modes)."""
        A1, A2 = self.dressed_modes(theta)
        A1d, A2d = A1.conj().T, A2.conj().T
        return {
            "X": A1d @ A2 + A2d @ A1,
            "Y": 1j * (A1d @ A2 - A2d @ A1),
            "Z": A1d @ A1 - A2d @ A2,
            "N": A1d @ A1 + A2d @ A2,
        }

    def dressed_modes(self, theta: float) -> tuple[np.ndarray, np.ndarray]:
        c, s = math.cos(theta), math.sin(theta)
        return c * self.a + s * self.b, c * self.b - s * self.a


def build_mode_operators(config: FockConfig) -> ModeOperators:
    """Ladder operators ``a = a_1 (x) 1`` and ``b = 1 (x) a_1`` on the truncated space."""
    a = np.kron(_lowering(config.levels_a), np.eye(config.levels_b))
    b = np.kron(np.eye(config.levels_a), _lowering(config.levels_b))
    if config.max_excitation is not None:
        na = np.repeat(np.arange(config.levels_a), config.levels_b)
        nb = np.tile(np.arange(config.levels_b), config.levels_a)
        keep = np.flatnonzero(na + nb <= config.max_excitation)
        a, b = a[np.ix_(keep, keep)], b[np.ix_(keep, keep)]
    return ModeOperators(config, a, b)
