"""
Order probes: how fast an indicator vanishes near a critical point that sits
at x_j + lam*dx, measured by fitting log2|q| against log2(dx).
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Tuple

import numpy as np
from numpy.polynomial import polynomial

from src.config import (
    DEFAULT_SEED, PROBE_AGREEMENT, PROBE_DRAWS, PROBE_LEVELS, PROBE_MAX_RESIDUAL,
)
from src.models.indicators import TauKind, TauTag, tau
from src.models.stencil import DeltaTag, StencilWindow, finite_delta, smoothness_beta

logger = logging.getLogger(__name__)

# Random Taylor coefficients of g have this magnitude range and a random sign
COEFFICIENT_RANGE = (0.5, 2.0)
TAIL_DEGREE = 6


class QuantityTag(Enum):
    """Quantities an order probe can measure."""
    BETA2_0 = "beta2_0"
    BETA2_1 = "beta2_1"
    BETA3_0 = "beta3_0"
    BETA3_1 = "beta3_1"
    BETA3_2 = "beta3_2"
    TAU3 = "tau3"
    TAU_N = "tau_n"
    TAU_CP1 = "tau_cp1"
    TAU_CP2 = "tau_cp2"
    D22_SQ = "d22_sq"
    D42_SQ = "d42_sq"

    @classmethod
    def parse(cls, text: str) -> "QuantityTag":
        key = text.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            valid = ", ".join(tag.name for tag in cls)
            raise ValueError(f"unknown probe quantity {text!r} (valid: {valid})") from None


def _squared(tag: DeltaTag) -> Callable[[StencilWindow], np.ndarray]:
    def evaluate(w: StencilWindow) -> np.ndarray:
        d = finite_delta(w, tag)
        return d * d
    return evaluate


QUANTITIES: Dict[QuantityTag, Callable[[StencilWindow], np.ndarray]] = {
    QuantityTag.BETA2_0: lambda w: smoothness_beta(w, 2, 0),
    QuantityTag.BETA2_1: lambda w: smoothness_beta(w, 2, 1),
    QuantityTag.BETA3_0: lambda w: smoothness_beta(w, 3, 0),
    QuantityTag.BETA3_1: lambda w: smoothness_beta(w, 3, 1),
    QuantityTag.BETA3_2: lambda w: smoothness_beta(w, 3, 2),
    QuantityTag.TAU3: lambda w: tau(w, TauKind(TauTag.TAU3)),
    QuantityTag.TAU_N: lambda w: tau(w, TauKind(TauTag.TAU_N)),
    QuantityTag.TAU_CP1: lambda w: tau(w, TauKind(TauTag.TAU_CP1)),
    QuantityTag.TAU_CP2: lambda w: tau(w, TauKind(TauTag.TAU_CP2)),
    QuantityTag.D22_SQ: _squared(DeltaTag.D2_2),
    QuantityTag.D42_SQ: _squared(DeltaTag.D4_2),
}


@dataclass(frozen=True)
class CriticalPointFunction:
    """
    f(s) = c + s^(order+1) * g(s), with s measured from the critical point.

    The first ``order`` derivatives vanish at s = 0 and the next one does not.
    """
    order: int
    constant: float
    coefficients: Tuple[float, ...]

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        return self.constant + s ** (self.order + 1) * polynomial.polyval(s, self.coefficients)


def _random_magnitudes(rng: np.random.Generator, size: int) -> np.ndarray:
    lo, hi = COEFFICIENT_RANGE
    return rng.uniform(lo, hi, size) * rng.choice((-1.0, 1.0), size)


def critical_point_function(order: int, rng: np.random.Generator) -> CriticalPointFunction:
    """Draw a smooth function with a critical point of ``order`` (0, 1 or 2) at s = 0."""
    if order not in (0, 1, 2):
        raise ValueError(f"critical-point order must be 0, 1 or 2, got {order}")
    constant = float(rng.uniform(*COEFFICIENT_RANGE))
    coefficients = tuple(float(v) for v in _random_magnitudes(rng, TAIL_DEGREE + 1))
    return CriticalPointFunction(order, constant, coefficients)


@dataclass(frozen=True)
class OrderProbeResult:
    """
    Fitted decay rate of one quantity.

    Attributes:
        quantity: What was measured
        lam: Critical-point offset inside the cell, in units of dx
        cp_order: Order of the critical point
        slope: Mean fitted slope over the draws
        residual: Largest RMS fit residual over the draws
        draw_slopes: Slope of each independent draw
        conclusive: Residual and draw agreement are within limits
    """
    quantity: QuantityTag
    lam: float
    cp_order: int
    slope: float
    residual: float
    draw_slopes: Tuple[float, ...]
    conclusive: bool

    @property
    def rounded_order(self) -> int:
        return int(round(self.slope))


def sample_window(f: CriticalPointFunction, lam: float, dx: float) -> StencilWindow:
    """Five samples f_(j-2)..f_(j+2) with the critical point at x_j + lam*dx."""
    s = (np.arange(-2, 3, dtype=float) - lam) * dx
    return StencilWindow(f(s), 2, dx)


def fit_slope(dxs: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Least-squares slope of log2|values| against log2(dx) and its RMS residual."""
    x = np.log2(dxs)
    y = np.log2(np.abs(values))
    coeffs, residuals, *_ = np.polyfit(x, y, 1, full=True)
    rms = float(np.sqrt(residuals[0] / len(x))) if len(residuals) else 0.0
    return float(coeffs[0]), rms


def acp_order_probe(
    quantity: QuantityTag, lam: float, cp_order: int, seed: int = DEFAULT_SEED,
    draws: int = PROBE_DRAWS,
) -> OrderProbeResult:
    """
    Measure the order at which ``quantity`` vanishes near a critical point.

    Each draw builds a fresh random function and evaluates the quantity on the
    dyadic ladder dx = 2^-4 .. 2^-8. The probe is conclusive when every draw
    fits a straight line with small residual and the draws agree.

    Args:
        quantity: Indicator or difference product to measure
        lam: Critical-point offset in (-1, 2)
        cp_order: 0, 1 or 2
        seed: Seed of the random Taylor coefficients
        draws: Number of independent functions

    Returns:
        OrderProbeResult
    """
    if not -1.0 < lam < 2.0:
        raise ValueError(f"lam must lie in (-1, 2), got {lam}")
    evaluate = QUANTITIES[quantity]
    rng = np.random.default_rng(seed)
    dxs = np.array([2.0 ** -level for level in PROBE_LEVELS])

    slopes, residuals = [], []
    usable = True
    for _ in range(draws):
        f = critical_point_function(cp_order, rng)
        values = np.array([float(evaluate(sample_window(f, lam, dx))) for dx in dxs])
        if np.any(values == 0.0):
            usable = False
            slopes.append(float("nan"))
            residuals.append(float("inf"))
            continue
        slope, rms = fit_slope(dxs, values)
        slopes.append(slope)
        residuals.append(rms)

    slope = float(np.mean(slopes))
    residual = float(max(residuals))
    conclusive = (
        usable
        and residual <= PROBE_MAX_RESIDUAL
        and float(np.max(slopes) - np.min(slopes)) <= PROBE_AGREEMENT
    )
    if not conclusive:
        logger.warning("inconclusive probe %s lam=%g CP%d: slopes %s, residual %.3g",
                       quantity.name, lam, cp_order, slopes, residual)
    else:
        logger.info("probe %s lam=%g CP%d: slope %.3f", quantity.name, lam, cp_order, slope)
    return OrderProbeResult(quantity, lam, cp_order, slope, residual, tuple(slopes), conclusive)


__all__ = [
    "QuantityTag", "QUANTITIES", "CriticalPointFunction", "critical_point_function",
    "OrderProbeResult", "sample_window", "fit_slope", "acp_order_probe",
]
