"""Stencil windows and the pure kernels evaluated on them."""
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Tuple

import numpy as np

from src.errors import StencilError

# Position of f_j inside a positive-wind window of each width
POSITIVE_OFFSET = {3: 1, 4: 1, 5: 2}


@dataclass(frozen=True)
class StencilWindow:
    """
    A short ordered slice of flux samples around f_j.

    The leading axis of ``values`` runs over the stencil points; any trailing
    axes are batch axes, so one window can hold every interface of a grid.

    Attributes:
        values: Samples f_{j-offset}, ..., f_{j-offset+length-1}
        offset: Index of f_j along the leading axis
        dx: Grid spacing
    """
    values: np.ndarray
    offset: int
    dx: float = 1.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.ndim == 0 or values.shape[0] not in (3, 4, 5):
            raise StencilError(f"window length must be 3, 4 or 5, got shape {values.shape}")
        if not 0 <= self.offset < values.shape[0]:
            raise StencilError(f"offset {self.offset} outside window of length {values.shape[0]}")
        if not (np.isfinite(self.dx) and self.dx > 0):
            raise StencilError(f"dx must be positive and finite, got {self.dx!r}")
        if not np.all(np.isfinite(values)):
            raise StencilError("window contains non-finite values")

    @classmethod
    def centered(cls, values, dx: float = 1.0) -> "StencilWindow":
        """Build a positive-wind window using the conventional offset for its width."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 0 or values.shape[0] not in POSITIVE_OFFSET:
            raise StencilError(f"window length must be 3, 4 or 5, got shape {values.shape}")
        return cls(values, POSITIVE_OFFSET[values.shape[0]], dx)

    @property
    def length(self) -> int:
        return self.values.shape[0]

    def point(self, i: int) -> np.ndarray:
        """
        Return f_{j+i}.

        Raises:
            StencilError: if the window does not reach that point
        """
        index = self.offset + i
        if not 0 <= index < self.length:
            raise StencilError(
                f"f_(j{i:+d}) is outside the window (length {self.length}, offset {self.offset})"
            )
        return self.values[index]

    def covers(self, first: int, last: int) -> bool:
        """Return True if f_{j+first} .. f_{j+last} all lie inside the window."""
        return self.offset + first >= 0 and self.offset + last < self.length

    def mirrored(self) -> "StencilWindow":
        """Reverse the window about its center, as used for the opposite wind."""
        return StencilWindow(self.values[::-1], self.length - 1 - self.offset, self.dx)


@dataclass(frozen=True)
class CandidateTable:
    """
    Coefficients of the candidate schemes and smoothness indicators.

    Every table is keyed by the candidate stencil size r (2 or 3). For a given
    r and candidate k the points used are f_{j-r+k+1} .. f_{j+k}.

    Attributes:
        a: Candidate coefficients a[r][k][l]
        d: Linear weights d[r][k]
        b: Indicator rows b[r][k][m][l]
        c: Indicator outer coefficients c[r][m]
    """
    a: Dict[int, Tuple[Tuple[float, ...], ...]]
    d: Dict[int, Tuple[float, ...]]
    b: Dict[int, Tuple[Tuple[Tuple[float, ...], ...], ...]]
    c: Dict[int, Tuple[float, ...]]

    def validate(self) -> None:
        """Check the consistency invariants; raise ValueError on the first violation."""
        for r in self.a:
            if abs(sum(self.d[r]) - 1.0) > 1e-14 or min(self.d[r]) <= 0.0:
                raise ValueError(f"linear weights for r={r} must be positive and sum to one")
            for k, row in enumerate(self.a[r]):
                if abs(sum(row) - 1.0) > 1e-14:
                    raise ValueError(f"candidate r={r}, k={k} does not reproduce constants")
            for k, rows in enumerate(self.b[r]):
                for m, row in enumerate(rows):
                    if abs(sum(row)) > 1e-14:
                        raise ValueError(f"indicator row r={r}, k={k}, m={m} does not vanish on constants")


CANDIDATES = CandidateTable(
    a={
        2: ((-1 / 2, 3 / 2), (1 / 2, 1 / 2)),
        3: ((2 / 6, -7 / 6, 11 / 6), (-1 / 6, 5 / 6, 2 / 6), (2 / 6, 5 / 6, -1 / 6)),
    },
    d={
        2: (1 / 3, 2 / 3),
        3: (1 / 10, 6 / 10, 3 / 10),
    },
    b={
        2: (((-1.0, 1.0),), ((-1.0, 1.0),)),
        3: (
            ((1.0, -4.0, 3.0), (1.0, -2.0, 1.0)),
            ((-1.0, 0.0, 1.0), (1.0, -2.0, 1.0)),
            ((3.0, -4.0, 1.0), (1.0, -2.0, 1.0)),
        ),
    },
    c={
        2: (1.0,),
        3: (1 / 4, 13 / 12),
    },
)


def _substencil(w: StencilWindow, r: int, k: int):
    if r not in CANDIDATES.a:
        raise StencilError(f"stencil size r must be 2 or 3, got {r}")
    if not 0 <= k < r:
        raise StencilError(f"candidate index k must lie in [0, {r - 1}], got {k}")
    first = -r + k + 1
    if not w.covers(first, first + r - 1):
        raise StencilError(
            f"window (length {w.length}, offset {w.offset}) too short for r={r}, k={k}"
        )
    return [w.point(first + l) for l in range(r)]


def candidate_reconstruct(w: StencilWindow, r: int, k: int) -> np.ndarray:
    """
    Evaluate candidate q^r_k, the approximation of h(x_{j+1/2}) on sub-stencil k.

    Args:
        w: Window holding the sub-stencil
        r: Candidate stencil size (2 or 3)
        k: Candidate index

    Returns:
        q^r_k with the window's batch shape
    """
    points = _substencil(w, r, k)
    coefficients = CANDIDATES.a[r][k]
    result = coefficients[0] * points[0]
    for a, f in zip(coefficients[1:], points[1:]):
        result = result + a * f
    return result


def smoothness_beta(w: StencilWindow, r: int, k: int) -> np.ndarray:
    """
    Evaluate the Jiang-Shu smoothness indicator beta^(r)_k.

    The indicator is a positive semi-definite quadratic form in the sub-stencil
    values; it vanishes on constants and scales with the square of the data.
    """
    points = _substencil(w, r, k)
    result = 0.0
    for c, row in zip(CANDIDATES.c[r], CANDIDATES.b[r][k]):
        inner = row[0] * points[0]
        for b, f in zip(row[1:], points[1:]):
            inner = inner + b * f
        result = result + c * inner * inner
    return result


class DeltaTag(Enum):
    """Undivided difference operators delta^(m)n (derivative m, accuracy n)."""
    D1_2 = "d1_2"
    D2_2 = "d2_2"
    D1_3 = "d1_3"
    D3_1 = "d3_1"
    D1_4 = "d1_4"
    D2_4 = "d2_4"
    D3_2 = "d3_2"
    D4_2 = "d4_2"


# Offsets relative to j and their weights
DELTA_STENCILS: Dict[DeltaTag, Dict[int, float]] = {
    DeltaTag.D1_2: {-1: -1.0, 1: 1.0},
    DeltaTag.D2_2: {-1: 1.0, 0: -2.0, 1: 1.0},
    DeltaTag.D1_3: {-1: -2.0, 0: -3.0, 1: 6.0, 2: -1.0},
    DeltaTag.D3_1: {-1: -1.0, 0: 3.0, 1: -3.0, 2: 1.0},
    DeltaTag.D1_4: {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0},
    DeltaTag.D2_4: {-2: -1.0, -1: 16.0, 0: -30.0, 1: 16.0, 2: -1.0},
    DeltaTag.D3_2: {-2: -1.0, -1: 2.0, 1: -2.0, 2: 1.0},
    DeltaTag.D4_2: {-2: 1.0, -1: -4.0, 0: 6.0, 1: -4.0, 2: 1.0},
}


def finite_delta(w: StencilWindow, tag: DeltaTag) -> np.ndarray:
    """Return the undivided difference for ``tag`` (no powers of dx are applied)."""
    stencil = DELTA_STENCILS[tag]
    if not w.covers(min(stencil), max(stencil)):
        raise StencilError(
            f"{tag.name} needs f_(j{min(stencil):+d})..f_(j{max(stencil):+d}); "
            f"window has length {w.length} and offset {w.offset}"
        )
    result = 0.0
    for i, weight in stencil.items():
        result = result + weight * w.point(i)
    return result


__all__ = [
    "POSITIVE_OFFSET", "StencilWindow", "CandidateTable", "CANDIDATES",
    "candidate_reconstruct", "smoothness_beta", "DeltaTag", "DELTA_STENCILS", "finite_delta",
]
