"""
Search for quadratic-form indicators tau = v A v^T that vanish to a target
order at a first-order critical point, by linear algebra on the entries of A.

For points a and a critical point at lam (in units of dx), f_a expands as
sum_k f_k (a - lam)^k dx^k with f_1 = 0. The coefficient of f_k f_l dx^(k+l)
in v A v^T is linear in the entries of A; requiring it to vanish for every
k + l below the target order gives one constraint row per (k, l, lam).
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space, svd

from src.config import (
    DEFAULT_SEED, NULLSPACE_AMBIGUOUS_TOL, NULLSPACE_LAMBDA_SAMPLES, NULLSPACE_RANK_TOL,
)
from src.errors import NullspaceError

logger = logging.getLogger(__name__)

STENCIL_POINTS = {
    3: (-1, 0, 1),
    4: (-1, 0, 1, 2),
}
DEFAULT_EXTRA = {
    3: (),
    4: ((-0.5, 7),),
}
LAMBDA_RANGE = (-1.0, 2.0)

# tau_CP1 = |u.v| * |w.v| / 4 on (f_(j-1), f_j, f_(j+1), f_(j+2))
TAU_CP1_LEFT = (-23.0, 21.0, 3.0, -1.0)
TAU_CP1_RIGHT = (-1.0, 3.0, -3.0, 1.0)


@dataclass(frozen=True)
class NullspaceResult:
    """
    Quadratic forms satisfying every constraint.

    Attributes:
        points: Number of stencil points (3 or 4)
        constraint_set: Readable id of the constraints, e.g. ``order5+lam-0.5:order7``
        dimension: Nullspace dimension
        basis: One symmetric matrix per basis vector, unit Frobenius norm
        residual: Largest constraint residual over the basis
        singular_values: Singular values relative to the largest
    """
    points: int
    constraint_set: str
    dimension: int
    basis: Tuple[np.ndarray, ...]
    residual: float
    singular_values: Tuple[float, ...]


def _upper_pairs(n: int):
    return [(a, b) for a in range(n) for b in range(a, n)]


def _order_pairs(order: int):
    """Taylor index pairs k <= l, both in {0, 2, 3, ...}, with k + l < order."""
    indices = [k for k in range(order) if k != 1]
    return [(k, l) for k in indices for l in indices if k <= l and k + l < order]


def _constraint_rows(points: Sequence[int], lam: float, order: int) -> np.ndarray:
    positions = np.asarray(points, dtype=float) - lam
    rows = []
    for k, l in _order_pairs(order):
        phi_k, phi_l = positions ** k, positions ** l
        row = []
        for a, b in _upper_pairs(len(points)):
            if a == b:
                row.append(phi_k[a] * phi_l[a])
            else:
                row.append(phi_k[a] * phi_l[b] + phi_k[b] * phi_l[a])
        rows.append(row)
    return np.array(rows)


def constraint_matrix(points: Sequence[int], order: int, lambdas: Sequence[float],
                      extra: Sequence[Tuple[float, int]] = ()) -> np.ndarray:
    """Stack the constraint rows for every sampled lam and every extra (lam, order); rows unit-norm."""
    blocks = [_constraint_rows(points, lam, order) for lam in lambdas]
    blocks += [_constraint_rows(points, lam, extra_order) for lam, extra_order in extra]
    matrix = np.vstack(blocks)
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    return matrix / np.where(norms > 0.0, norms, 1.0)


def symmetric_from_upper(vector: np.ndarray, n: int) -> np.ndarray:
    """Symmetric matrix whose upper triangle (row-major) is ``vector``."""
    matrix = np.zeros((n, n))
    for value, (a, b) in zip(vector, _upper_pairs(n)):
        matrix[a, b] = matrix[b, a] = value
    return matrix


def normalize_form(matrix: np.ndarray) -> np.ndarray:
    """Scale to unit Frobenius norm with the largest-magnitude entry positive."""
    matrix = np.asarray(matrix, dtype=float)
    pivot = matrix.flat[np.argmax(np.abs(matrix))]
    return matrix / (np.linalg.norm(matrix) * np.sign(pivot))


def tau_cp1_form() -> np.ndarray:
    """Normalized symmetric matrix of the tau_CP1 quadratic form."""
    u, w = np.array(TAU_CP1_LEFT), np.array(TAU_CP1_RIGHT)
    outer = np.outer(u, w)
    return normalize_form(0.5 * (outer + outer.T))


def forms_match(a: np.ndarray, b: np.ndarray, tol: float = 1e-8) -> bool:
    """Equal up to scale and sign."""
    na, nb = normalize_form(a), normalize_form(b)
    return min(np.max(np.abs(na - nb)), np.max(np.abs(na + nb))) <= tol


def _constraint_set_id(order: int, extra: Sequence[Tuple[float, int]]) -> str:
    parts = [f"order{order}"] + [f"lam{lam:g}:order{o}" for lam, o in extra]
    return "+".join(parts)


def quadratic_form_nullspace(
    points: int,
    order: int = 5,
    extra: Optional[Sequence[Tuple[float, int]]] = None,
    seed: int = DEFAULT_SEED,
    samples: int = NULLSPACE_LAMBDA_SAMPLES,
) -> NullspaceResult:
    """
    Find every symmetric quadratic form meeting the order constraints.

    Args:
        points: 3 (f_(j-1)..f_(j+1)) or 4 (f_(j-1)..f_(j+2))
        order: Required order at randomly sampled lam in (-1, 2)
        extra: Additional (lam, order) constraints; defaults to lam = -1/2,
               order 7 for four points and nothing for three
        seed: Seed of the sampled lam values
        samples: Number of sampled lam values

    Returns:
        NullspaceResult

    Raises:
        NullspaceError: if a singular value falls between the rank and
            ambiguity tolerances, so the rank cannot be decided
    """
    if points not in STENCIL_POINTS:
        raise ValueError(f"stencil points must be 3 or 4, got {points}")
    extra = tuple(DEFAULT_EXTRA[points] if extra is None else extra)
    rng = np.random.default_rng(seed)
    lambdas = rng.uniform(*LAMBDA_RANGE, samples)
    matrix = constraint_matrix(STENCIL_POINTS[points], order, lambdas, extra)

    singular = svd(matrix, compute_uv=False)
    relative = singular / singular[0]
    ambiguous = relative[(relative > NULLSPACE_RANK_TOL) & (relative < NULLSPACE_AMBIGUOUS_TOL)]
    if ambiguous.size:
        raise NullspaceError(
            f"constraint matrix is ill-conditioned near its rank "
            f"(relative singular value {ambiguous.min():.3e})",
            float(ambiguous.min()),
        )

    kernel = null_space(matrix, rcond=NULLSPACE_RANK_TOL)
    residual = float(np.max(np.abs(matrix @ kernel))) if kernel.size else 0.0
    basis = tuple(normalize_form(symmetric_from_upper(kernel[:, i], points))
                  for i in range(kernel.shape[1]))
    set_id = _constraint_set_id(order, extra)
    logger.info("nullspace %d points, %s: dimension %d, residual %.2e",
                points, set_id, len(basis), residual)
    return NullspaceResult(points, set_id, len(basis), basis, residual, tuple(float(v) for v in relative))


__all__ = [
    "STENCIL_POINTS", "NullspaceResult", "constraint_matrix", "symmetric_from_upper",
    "normalize_form", "tau_cp1_form", "forms_match", "quadratic_form_nullspace",
]
