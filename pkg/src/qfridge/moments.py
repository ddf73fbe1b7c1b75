"""Closed linear equations for the SU(2) moments of two damped bosonic modes.

Both refrigerator models reduce to the same structure.  Two modes with
lowering operators ``A1``, ``A2`` relax independently (damping ``zeta1``,
``zeta2``, thermal sources ``s1``, ``s2``), rotate into each other at the
frequency gap ``delta``, and are dephased by a double commutator
``-eta [W, [W, .]]`` with ``W = w . (X, Y, Z)`` for a unit vector ``w``.

Moments are ordered ``(x, y, z, n)`` with

    X = A1'A2 + A2'A1,  Y = i(A1'A2 - A2'A1),  Z = A1'A1 - A2'A2,  N = A1'A1 + A2'A2.

These satisfy ``[X, Y] = -2iZ`` (and cyclic), so ``[W, [W, v.S]] = 4 (v - w (w.v)).S``.
"""

from __future__ import annotations

import numpy as np

from .thermo import MomentState

X, Y, Z, N = range(4)


def su2_moment_system(delta: float, zeta1: float, zeta2: float, s1: float, s2: float,
                      eta: float, w=(1.0, 0.0, 0.0)) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A, b)`` with ``d/dt (x, y, z, n) = A @ (x, y, z, n) + b``."""
    w = np.asarray(w, dtype=float)
    A = np.zeros((4, 4))
    mean = 0.5 * (zeta1 + zeta2)
    half_diff = 0.5 * (zeta1 - zeta2)

    # coherent rotation generated by (delta/2) Z
    A[X, Y] += delta
    A[Y, X] -= delta

    # independent relaxation of both modes
    A[X, X] -= mean
    A[Y, Y] -= mean
    A[Z, Z] -= mean
    A[Z, N] -= half_diff
    A[N, N] -= mean
    A[N, Z] -= half_diff

    # dephasing kills the part of (x, y, z) orthogonal to w
    A[:3, :3] -= 4.0 * eta * (np.eye(3) - np.outer(w, w))

    b = np.array([0.0, 0.0, s1 - s2, s1 + s2])
    return A, b


def solve_stationary(A: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.linalg.solve(A, -b)


def to_state(vec) -> MomentState:
    x, y, z, n = (float(v) for v in vec)
    return MomentState(x, y, z, n)


def dephasing_power(eta: float, delta: float, w, state: MomentState) -> float:
    """Energy flow ``<-eta [W,[W,H]]>`` for ``H = (delta/2) Z + const * N``."""
    w = np.asarray(w, dtype=float)
    h = np.array([0.0, 0.0, 0.5 * delta])
    m = np.array([state.x, state.y, state.z])
    return float(-4.0 * eta * (h - w * (w @ h)) @ m)


def bath_fixed_point(zeta1: float, zeta2: float, s1: float, s2: float) -> np.ndarray:
    """Stationary moments when only the two relaxation channels act."""
    n1, n2 = s1 / zeta1, s2 / zeta2
    return np.array([0.0, 0.0, n1 - n2, n1 + n2])


def stationary_deviation(A: np.ndarray, eta: float, w, fixed_point: np.ndarray) -> np.ndarray:
    """Stationary ``(x, y, z, n)`` of the full system ``A`` minus ``fixed_point``.

    ``fixed_point`` is annihilated by everything but the dephasing term, so the
    deviation ``d`` solves ``A d = 4 eta (1 - w w^T) fixed_point`` with no
    cancellation between large thermal occupations.
    """
    if eta == 0:
        return np.zeros(4)
    w = np.asarray(w, dtype=float)
    rhs = np.zeros(4)
    rhs[:3] = 4.0 * eta * (fixed_point[:3] - w * (w @ fixed_point[:3]))
    return np.linalg.solve(A, rhs)


def stationary_moments(A: np.ndarray, eta: float, w, fixed_point: np.ndarray) -> np.ndarray:
    """Stationary ``(x, y, z, n)`` of the full system ``A``."""
    return fixed_point + stationary_deviation(A, eta, w, fixed_point)


def two_mode_balance(n1: float, n2: float, g1: float, g2: float,
                     eta: float) -> tuple[float, float, float]:
    """Stationary ``(z, delta n_1, delta n_2)`` of two damped modes joined by swap dephasing.

    Mode ``k`` relaxes to ``n_k`` at rate ``g_k`` and the dephasing moves
    ``2 eta z`` quanta per unit time from mode 1 to mode 2.  Deviations are
    returned relative to ``(n1, n2)`` so that nothing large is subtracted.
    """
    z0 = n1 - n2
    if eta == 0:
        return z0, 0.0, 0.0
    z = z0 / (1.0 + 2.0 * eta * (1.0 / g1 + 1.0 / g2))
    return z, -2.0 * eta * z / g1, 2.0 * eta * z / g2
