"""
Randomized checks of the monotonicity properties of Z-type weight ratios.

Each check compares alpha-ratios alpha_D / alpha_C (beta_C < beta_D) for two
parameter values and counts the samples that break the stated ordering.
"""
import logging
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy.optimize import brentq

from src.config import (
    DEFAULT_SEED, PROPOSITION_LOG_RANGE, PROPOSITION_SAMPLES, PROPOSITION_TIE_ULPS,
)

logger = logging.getLogger(__name__)

EQUALITY_TOLERANCE = 1e-12
# Every n-th sample of the exponent-on-tau check is drawn with tau = 1 exactly
UNIT_TAU_EVERY = 10
C_LOG_RANGE = (-3.0, 3.0)
P_MAX_TAU_EXPONENT = 3.0


def proposition_four_threshold() -> float:
    """Root of ln(u) + 1 + u, the lower bound on tau/beta_D for the exponent check."""
    return brentq(lambda u: np.log(u) + 1.0 + u, 0.1, 1.0, xtol=1e-15)


@dataclass(frozen=True)
class Counterexample:
    """A sample that violates the stated ordering; rendered verbatim in reports."""
    prop_id: int
    tau: float
    beta_c: float
    beta_d: float
    first: float
    second: float
    ratio_first: float
    ratio_second: float

    def to_line(self) -> str:
        return (
            f"prop={self.prop_id} tau={self.tau!r} beta_C={self.beta_c!r} beta_D={self.beta_d!r} "
            f"param1={self.first!r} param2={self.second!r} "
            f"ratio1={self.ratio_first!r} ratio2={self.ratio_second!r}"
        )


@dataclass
class PropositionResult:
    """Tally of one proposition check."""
    prop_id: int
    samples: int
    passed: int = 0
    ties: int = 0
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size: int) -> np.ndarray:
    return 10.0 ** rng.uniform(lo, hi, size)


def _ordered_betas(rng: np.random.Generator, size: int, upper: float) -> Tuple[np.ndarray, np.ndarray]:
    lo = PROPOSITION_LOG_RANGE[0]
    pair = _log_uniform(rng, lo, np.log10(upper), (2, size))
    return np.min(pair, axis=0), np.max(pair, axis=0)


def _ordered_params(rng: np.random.Generator, size: int, lo: float, hi: float):
    """Two parameters per sample with first < second."""
    pair = rng.uniform(lo, hi, (2, size))
    return np.min(pair, axis=0), np.max(pair, axis=0)


def _sample(prop_id: int, rng: np.random.Generator, n: int):
    """
    Draw samples inside the admissible region of one proposition.

    Returns:
        tau, beta_C, beta_D, param1, param2, ratio function, expected sign of
        ratio(param1) - ratio(param2) per sample (0 for equality)
    """
    lo, hi = PROPOSITION_LOG_RANGE
    if prop_id == 1:
        beta_c, beta_d = _ordered_betas(rng, n, np.e)
        tau = _log_uniform(rng, lo, hi, n)
        p1, p2 = _ordered_params(rng, n, 0.0, 1.0)
        p1 = np.maximum(p1, np.finfo(float).tiny)

        def ratio(p):
            return (1.0 + tau * beta_d ** -p) / (1.0 + tau * beta_c ** -p)
        return tau, beta_c, beta_d, p1, p2, ratio, np.ones(n)

    if prop_id == 2:
        beta_c, beta_d = _ordered_betas(rng, n, 10.0 ** hi)
        tau = _log_uniform(rng, lo, hi, n)
        tau[::UNIT_TAU_EVERY] = 1.0
        p1, p2 = _ordered_params(rng, n, 1.0, P_MAX_TAU_EXPONENT)

        def ratio(p):
            return (1.0 + tau ** p / beta_d) / (1.0 + tau ** p / beta_c)
        return tau, beta_c, beta_d, p1, p2, ratio, np.sign(tau - 1.0)

    if prop_id == 3:
        beta_c, beta_d = _ordered_betas(rng, n, 10.0 ** hi)
        tau = _log_uniform(rng, lo, hi, n)
        c2, c1 = _ordered_params(rng, n, *C_LOG_RANGE)
        c1, c2 = 10.0 ** c1, 10.0 ** c2

        def ratio(c):
            return (1.0 + c * tau / beta_d) / (1.0 + c * tau / beta_c)
        return tau, beta_c, beta_d, c1, c2, ratio, -np.ones(n)

    if prop_id == 4:
        threshold = proposition_four_threshold()
        taus, beta_ds = [], []
        count = 0
        while count < n:
            t = _log_uniform(rng, lo, hi, 2 * n)
            b = _log_uniform(rng, lo, hi, 2 * n)
            keep = t / b > threshold
            taus.append(t[keep])
            beta_ds.append(b[keep])
            count += int(np.count_nonzero(keep))
        tau = np.concatenate(taus)[:n]
        beta_d = np.concatenate(beta_ds)[:n]
        beta_c = 10.0 ** rng.uniform(lo, np.log10(beta_d), n)
        p2, p1 = _ordered_params(rng, n, 0.0, 1.0)
        p2 = np.maximum(p2, np.finfo(float).tiny)

        def ratio(p):
            return (1.0 + (tau / beta_d) ** p) / (1.0 + (tau / beta_c) ** p)
        return tau, beta_c, beta_d, p1, p2, ratio, -np.ones(n)

    raise ValueError(f"proposition id must be 1, 2, 3 or 4, got {prop_id}")


def proposition_check(prop_id: int, samples: int = PROPOSITION_SAMPLES,
                      seed: int = DEFAULT_SEED) -> PropositionResult:
    """
    Sample a proposition's admissible region and tally violations.

    Strict orderings whose two sides agree within a few ulp count as ties. The
    equality branch (tau = 1 in the exponent-on-tau check) must hold to 1e-12.

    Args:
        prop_id: 1 (exponent on beta), 2 (exponent on tau), 3 (tau scale)
                 or 4 (exponent on tau/beta)
        samples: Number of random samples
        seed: Seed; the proposition id is mixed in so each check has its own stream

    Returns:
        PropositionResult with every violating sample listed
    """
    rng = np.random.default_rng([seed, prop_id])
    tau, beta_c, beta_d, first, second, ratio, expected = _sample(prop_id, rng, samples)
    with np.errstate(over="ignore"):
        r1, r2 = ratio(first), ratio(second)

    gap = r1 - r2
    ulps = PROPOSITION_TIE_ULPS * np.spacing(np.maximum(np.abs(r1), np.abs(r2)))
    equal_branch = expected == 0
    holds = np.where(equal_branch, np.abs(gap) <= EQUALITY_TOLERANCE, np.sign(gap) == expected)
    tie = ~equal_branch & ~holds & (np.abs(gap) <= ulps)

    result = PropositionResult(prop_id, samples)
    result.passed = int(np.count_nonzero(holds))
    result.ties = int(np.count_nonzero(tie))
    for i in np.flatnonzero(~holds & ~tie):
        result.counterexamples.append(Counterexample(
            prop_id, float(tau[i]), float(beta_c[i]), float(beta_d[i]),
            float(first[i]), float(second[i]), float(r1[i]), float(r2[i]),
        ))
    if result.counterexamples:
        logger.warning("proposition %d: %d counterexamples in %d samples",
                       prop_id, len(result.counterexamples), samples)
    else:
        logger.info("proposition %d: %d samples, %d ties, no counterexamples",
                    prop_id, samples, result.ties)
    return result


__all__ = [
    "Counterexample", "PropositionResult", "proposition_four_threshold", "proposition_check",
]
