"""Global smoothness indicators tau used by the Z-type weights."""
import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.config import TAU_CP2_SCALE
from src.errors import StencilError
from src.models.stencil import DeltaTag, StencilWindow, finite_delta, smoothness_beta

logger = logging.getLogger(__name__)


class TauTag(Enum):
    """Available global smoothness indicators."""
    TAU3 = "tau3"
    TAU_N = "tau_n"
    TAU_F3 = "tau_f3"
    TAU_P = "tau_p"
    TAU_CP1 = "tau_cp1"
    TAU_CP2 = "tau_cp2"


# Reduced forms tau = coefficient * (delta^(2)2)^2
REDUCED_COEFFICIENTS = {
    TauTag.TAU_N: 10.0 / 12.0,
    TauTag.TAU_P: 3.0 / 12.0,
    TauTag.TAU_F3: 2.0 / 12.0,
}

# Points f_{j+first} .. f_{j+last} each indicator reads
TAU_SUPPORT = {
    TauTag.TAU3: (-1, 1),
    TauTag.TAU_N: (-1, 1),
    TauTag.TAU_F3: (-1, 1),
    TauTag.TAU_P: (-1, 1),
    TauTag.TAU_CP1: (-1, 2),
    TauTag.TAU_CP2: (-2, 2),
}


@dataclass(frozen=True)
class TauKind:
    """
    A global indicator together with its free scale.

    Attributes:
        tag: Which indicator
        c: Scale of tau_CP2 (ignored by the other indicators)
    """
    tag: TauTag
    c: float = TAU_CP2_SCALE

    def __post_init__(self):
        if self.tag is TauTag.TAU_CP2 and not (np.isfinite(self.c) and self.c > 0):
            raise ValueError(f"tau_CP2 scale must be positive and finite, got {self.c!r}")


@dataclass(frozen=True)
class TauStarCoeffs:
    """Coefficients (a1, a2, a3, b) of the generic three-point quadratic indicator."""
    a1: float
    a2: float
    a3: float
    b: float

    def __post_init__(self):
        if not all(np.isfinite(v) for v in (self.a1, self.a2, self.a3, self.b)):
            raise ValueError("tau* coefficients must be finite")


def _require_support(w: StencilWindow, tag: TauTag):
    first, last = TAU_SUPPORT[tag]
    if not w.covers(first, last):
        raise StencilError(
            f"{tag.name} needs f_(j{first:+d})..f_(j{last:+d}); "
            f"window has length {w.length} and offset {w.offset}"
        )


def tau(w: StencilWindow, kind: TauKind) -> np.ndarray:
    """
    Evaluate a global smoothness indicator on a window.

    All indicators use undivided differences, so no power of dx appears and
    tau/beta stays dimensionless. tau_N, tau_P and tau_F3 are evaluated in their
    reduced form c * (delta^(2)2)^2; tau_CP1 in its factored product form.

    Args:
        w: Window covering the indicator's support
        kind: Indicator and its scale

    Returns:
        Non-negative tau with the window's batch shape
    """
    tag = kind.tag
    _require_support(w, tag)

    if tag is TauTag.TAU3:
        return np.abs(smoothness_beta(w, 2, 0) - smoothness_beta(w, 2, 1))

    if tag in REDUCED_COEFFICIENTS:
        d2 = finite_delta(w, DeltaTag.D2_2)
        return REDUCED_COEFFICIENTS[tag] * d2 * d2

    if tag is TauTag.TAU_CP1:
        fm, f0, f1, f2 = (w.point(i) for i in (-1, 0, 1, 2))
        first = -f2 + 3.0 * f1 + 21.0 * f0 - 23.0 * fm
        return 0.25 * np.abs(first * finite_delta(w, DeltaTag.D3_1))

    d4 = finite_delta(w, DeltaTag.D4_2)
    return kind.c * d4 * d4


def tau_cp1_combination(w: StencilWindow) -> np.ndarray:
    """tau_CP1 written as the combination of delta products it was built from."""
    _require_support(w, TauTag.TAU_CP1)
    d13 = finite_delta(w, DeltaTag.D1_3)
    d22 = finite_delta(w, DeltaTag.D2_2)
    d31 = finite_delta(w, DeltaTag.D3_1)
    return np.abs(d13 * d31 - 3.0 * d22 * d31 + 0.75 * d31 * d31)


def tau_definitional(w: StencilWindow, tag: TauTag) -> np.ndarray:
    """
    Evaluate tau_N, tau_F3 or tau_P from their beta combinations.

    The reduced forms returned by ``tau`` are the definitions of record; this
    function exists to cross-check them.
    """
    if tag not in REDUCED_COEFFICIENTS:
        raise ValueError(f"{tag.name} has no separate definitional form")
    _require_support(w, tag)
    mean_beta = 0.5 * (smoothness_beta(w, 2, 0) + smoothness_beta(w, 2, 1))
    d12 = finite_delta(w, DeltaTag.D1_2)
    d22 = finite_delta(w, DeltaTag.D2_2)
    if tag is TauTag.TAU_N:
        wide = smoothness_beta(w, 3, 1)
    elif tag is TauTag.TAU_F3:
        wide = 0.25 * d12 * d12 + d22 * d22 / 12.0
    else:
        wide = 0.25 * d12 * d12
    return np.abs(mean_beta - wide)


def check_tau_forms(w: StencilWindow, rtol: float = 1e-13) -> float:
    """
    Compare reduced and definitional forms of tau_N, tau_F3 and tau_P.

    Returns:
        The largest relative disagreement found. A WARNING is logged when it
        exceeds ``rtol``; the reduced form remains the value of record.
    """
    worst = 0.0
    for tag in REDUCED_COEFFICIENTS:
        reduced = np.asarray(tau(w, TauKind(tag)))
        definitional = np.asarray(tau_definitional(w, tag))
        scale = np.maximum(np.abs(reduced), np.max(np.abs(w.values)) ** 2 * 1e-3 + 1e-300)
        gap = float(np.max(np.abs(reduced - definitional) / scale))
        if gap > rtol:
            logger.warning("%s reduced and definitional forms differ by %.3e (relative)", tag.name, gap)
        worst = max(worst, gap)
    return worst


def tau_star(w: StencilWindow, coeffs: TauStarCoeffs) -> np.ndarray:
    """Evaluate the generic three-point quadratic indicator tau*."""
    if not w.covers(-1, 1):
        raise StencilError("tau* needs f_(j-1)..f_(j+1)")
    fm, f0, f1 = w.point(-1), w.point(0), w.point(1)
    total = (
        coeffs.a1 * (f0 - fm) ** 2
        + coeffs.a2 * (f1 - f0) ** 2
        + coeffs.a3 * (f1 - fm) ** 2
        + coeffs.b * (f1 - 2.0 * f0 + fm) ** 2
    )
    return np.abs(total)


__all__ = [
    "TauTag", "TauKind", "TauStarCoeffs", "REDUCED_COEFFICIENTS", "TAU_SUPPORT",
    "tau", "tau_cp1_combination", "tau_definitional", "check_tau_forms", "tau_star",
]
