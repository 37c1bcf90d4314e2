"""
Euler equation helpers: state decoding, Steger-Warming splitting and the
characteristic eigensystem.

Conserved arrays keep their components on the last axis:
(rho, rho*u, E) in 1-D and (rho, rho*u, rho*v, E) in 2-D. All routines work in
the x-direction; the y-direction reuses them through ``swap_momentum``.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.config import ENTROPY_FIX, GAMMA
from src.errors import NonPhysicalStateError


class AverageMode(Enum):
    """How the interface state for the characteristic projection is formed."""
    ARITHMETIC = "arithmetic"
    ROE = "roe"


@dataclass
class Primitives:
    """Primitive variables decoded from a conserved array."""
    rho: np.ndarray
    u: np.ndarray
    v: np.ndarray
    p: np.ndarray
    a: np.ndarray
    H: np.ndarray

    @property
    def q2(self) -> np.ndarray:
        return self.u * self.u + self.v * self.v


def _first_bad(mask: np.ndarray) -> tuple:
    return tuple(int(i) for i in np.argwhere(mask)[0]) if mask.ndim else ()


def primitives(U: np.ndarray, gamma: float = GAMMA, check: bool = True) -> Primitives:
    """
    Decode primitive variables.

    Raises:
        NonPhysicalStateError: if density or pressure is not positive (or not finite)
    """
    U = np.asarray(U, dtype=float)
    nvar = U.shape[-1]
    rho = U[..., 0]
    if check:
        bad = ~(np.isfinite(rho) & (rho > 0))
        if np.any(bad):
            cell = _first_bad(bad)
            raise NonPhysicalStateError(cell, f"density {rho[cell]!r}")
    u = U[..., 1] / rho
    v = U[..., 2] / rho if nvar == 4 else np.zeros_like(rho)
    E = U[..., -1]
    p = (gamma - 1.0) * (E - 0.5 * rho * (u * u + v * v))
    if check:
        bad = ~(np.isfinite(p) & (p > 0))
        if np.any(bad):
            cell = _first_bad(bad)
            raise NonPhysicalStateError(cell, f"pressure {p[cell]!r}")
    a = np.sqrt(np.abs(gamma * p / rho))
    H = (E + p) / rho
    return Primitives(rho, u, v, p, a, H)


def conserved(rho, u, v, p, gamma: float = GAMMA, two_d: bool = False) -> np.ndarray:
    """Encode primitive variables into a conserved array."""
    rho, u, v, p = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (rho, u, v, p)))
    E = p / (gamma - 1.0) + 0.5 * rho * (u * u + v * v)
    parts = [rho, rho * u, rho * v, E] if two_d else [rho, rho * u, E]
    return np.stack(parts, axis=-1)


def physical_flux(U: np.ndarray, gamma: float = GAMMA) -> np.ndarray:
    """x-direction flux F(U)."""
    s = primitives(U, gamma)
    parts = [s.rho * s.u, s.rho * s.u * s.u + s.p]
    if U.shape[-1] == 4:
        parts.append(s.rho * s.u * s.v)
    parts.append(s.u * (U[..., -1] + s.p))
    return np.stack(parts, axis=-1)


def _split_flux(s: Primitives, lam, gamma: float, two_d: bool) -> np.ndarray:
    l1, l2, l3 = lam
    scale = s.rho / (2.0 * gamma)
    mass = l1 + 2.0 * (gamma - 1.0) * l2 + l3
    parts = [
        scale * mass,
        scale * ((s.u - s.a) * l1 + 2.0 * (gamma - 1.0) * s.u * l2 + (s.u + s.a) * l3),
    ]
    if two_d:
        parts.append(scale * s.v * mass)
    parts.append(scale * (
        (s.H - s.u * s.a) * l1 + (gamma - 1.0) * s.q2 * l2 + (s.H + s.u * s.a) * l3
    ))
    return np.stack(parts, axis=-1)


def steger_warming_split(U: np.ndarray, gamma: float = GAMMA, entropy_fix: float = ENTROPY_FIX):
    """
    Split the x-direction flux into parts with non-negative and non-positive eigenvalues.

    Each eigenvalue lambda in (u-a, u, u+a) is split as (lambda +- |lambda|)/2;
    with a positive ``entropy_fix`` delta, |lambda| becomes sqrt(lambda^2 + delta^2).

    Returns:
        (F_plus, F_minus) with F_plus + F_minus = F(U)

    Raises:
        NonPhysicalStateError: if any state has rho <= 0 or p <= 0
    """
    U = np.asarray(U, dtype=float)
    s = primitives(U, gamma)
    two_d = U.shape[-1] == 4
    plus, minus = [], []
    for lam in (s.u - s.a, s.u, s.u + s.a):
        size = np.sqrt(lam * lam + entropy_fix * entropy_fix) if entropy_fix > 0 else np.abs(lam)
        plus.append(0.5 * (lam + size))
        minus.append(0.5 * (lam - size))
    return _split_flux(s, plus, gamma, two_d), _split_flux(s, minus, gamma, two_d)


def interface_average(U_left: np.ndarray, U_right: np.ndarray, gamma: float = GAMMA,
                      mode: AverageMode = AverageMode.ARITHMETIC) -> Primitives:
    """
    State used for the characteristic projection at each interface.

    Raises:
        NonPhysicalStateError: if the averaged state is not physical
    """
    if mode is AverageMode.ARITHMETIC:
        return primitives(0.5 * (U_left + U_right), gamma)
    left, right = primitives(U_left, gamma), primitives(U_right, gamma)
    wl, wr = np.sqrt(left.rho), np.sqrt(right.rho)
    total = wl + wr
    u = (wl * left.u + wr * right.u) / total
    v = (wl * left.v + wr * right.v) / total
    H = (wl * left.H + wr * right.H) / total
    a2 = (gamma - 1.0) * (H - 0.5 * (u * u + v * v))
    bad = ~(a2 > 0)
    if np.any(bad):
        cell = _first_bad(bad)
        raise NonPhysicalStateError(cell, f"Roe-averaged sound speed squared {a2[cell]!r}")
    rho = wl * wr
    a = np.sqrt(a2)
    return Primitives(rho, u, v, rho * a2 / gamma, a, H)


def eigenvectors(s: Primitives, gamma: float = GAMMA, two_d: bool = False):
    """
    Left and right eigenvectors of the x-direction flux Jacobian.

    Returns:
        (L, R), each of shape (*batch, nvar, nvar), with L @ R = I
    """
    u, v, a, H = s.u, s.v, s.a, s.H
    one, zero = np.ones_like(u), np.zeros_like(u)
    b1 = (gamma - 1.0) / (a * a)
    b2 = 0.5 * b1 * s.q2
    if two_d:
        R_cols = [
            [one, u - a, v, H - u * a],
            [one, u, v, 0.5 * s.q2],
            [zero, zero, one, v],
            [one, u + a, v, H + u * a],
        ]
        L_rows = [
            [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), -0.5 * b1 * v, 0.5 * b1],
            [1.0 - b2, b1 * u, b1 * v, -b1],
            [-v, zero, one, zero],
            [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), -0.5 * b1 * v, 0.5 * b1],
        ]
    else:
        R_cols = [
            [one, u - a, H - u * a],
            [one, u, 0.5 * u * u],
            [one, u + a, H + u * a],
        ]
        L_rows = [
            [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), 0.5 * b1],
            [1.0 - b2, b1 * u, -b1],
            [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), 0.5 * b1],
        ]
    L = np.stack([np.stack(row, axis=-1) for row in L_rows], axis=-2)
    R = np.stack([np.stack(col, axis=-1) for col in R_cols], axis=-1)
    return L, R


def characteristic_project(window: np.ndarray, L: np.ndarray) -> np.ndarray:
    """
    Project a window of split fluxes onto characteristic fields.

    Args:
        window: Shape (width, *batch, nvar)
        L: Left eigenvectors at each interface, shape (*batch, nvar, nvar)
    """
    return np.matmul(L, window[..., None])[..., 0]


def characteristic_unproject(values: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Map characteristic values of shape (*batch, nvar) back to conserved components."""
    return np.matmul(R, values[..., None])[..., 0]


def swap_momentum(U: np.ndarray) -> np.ndarray:
    """Exchange the x and y momentum components of a 2-D state array."""
    return U[..., [0, 2, 1, 3]]


def max_signal_speed(U: np.ndarray, gamma: float = GAMMA):
    """Return (max(|u|+a), max(|v|+a)) over the array."""
    s = primitives(U, gamma)
    return float(np.max(np.abs(s.u) + s.a)), float(np.max(np.abs(s.v) + s.a))


__all__ = [
    "AverageMode", "Primitives", "primitives", "conserved", "physical_flux",
    "steger_warming_split", "interface_average", "eigenvectors",
    "characteristic_project", "characteristic_unproject", "swap_momentum", "max_signal_speed",
]
