"""Scale-independence checks on the Shu-Osher problem."""
import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np

from src.config import (
    SCALE_CFL, SCALE_DT, SCALE_FAILURE_THRESHOLD, SCALE_GRID, SCALE_R_DX, SCALE_R_VAR,
    SCALE_TOLERANCE,
)
from src.errors import FailureRecord, RobustnessFailure
from src.models.weights import SchemeSpec
from src.solver.cases import CaseConfig, CaseTag
from src.solver.euler import primitives
from src.solver.solver import run_case

logger = logging.getLogger(__name__)


class ScaleMode(Enum):
    """What gets rescaled."""
    VARIABLE = "variable"
    LENGTH = "length"

    @classmethod
    def parse(cls, text: str) -> "ScaleMode":
        try:
            return cls(text.strip().lower())
        except ValueError:
            raise ValueError(f"unknown scale mode {text!r} (valid: variable, length)") from None


@dataclass(frozen=True)
class ScaleCheckResult:
    """
    Deviation between a rescaled run and the original.

    ``deviation`` is infinite when either run failed.
    """
    scheme: str
    mode: ScaleMode
    ratio: float
    deviation: float
    failure: Optional[FailureRecord] = None

    @property
    def independent(self) -> bool:
        return self.deviation <= SCALE_TOLERANCE

    @property
    def clearly_dependent(self) -> bool:
        return self.deviation >= SCALE_FAILURE_THRESHOLD


def scale_independence_check(spec: SchemeSpec, mode: ScaleMode, ratio: Optional[float] = None,
                             n: int = SCALE_GRID, workers: int = 1) -> ScaleCheckResult:
    """
    Run Shu-Osher twice, once rescaled, and compare after undoing the scale.

    Variable mode multiplies the initial density and pressure by ``ratio`` and
    keeps the fixed dt; density and pressure of the result are divided by
    ``ratio`` before comparison. Length mode stretches x (and so dx, the CFL
    time step and the end time) by ``ratio``; results are compared cell by cell.

    Returns:
        ScaleCheckResult with the max-norm deviation of density and pressure
    """
    if mode is ScaleMode.VARIABLE:
        ratio = SCALE_R_VAR if ratio is None else ratio
        base = CaseConfig(CaseTag.SHU_OSHER, spec, n=n, dt=SCALE_DT)
        scaled = replace(base, variable_scale=ratio)
        divisor = ratio
    else:
        ratio = SCALE_R_DX if ratio is None else ratio
        base = CaseConfig(CaseTag.SHU_OSHER, spec, n=n, cfl=SCALE_CFL)
        scaled = replace(base, length_scale=ratio, end_time=base.end_time * ratio)
        divisor = 1.0

    try:
        original = primitives(run_case(base, workers=workers).interior, base.gamma)
        rescaled = primitives(run_case(scaled, workers=workers).interior, scaled.gamma)
    except RobustnessFailure as exc:
        return ScaleCheckResult(spec.label, mode, ratio, float("inf"), exc.record)

    deviation = float(max(
        np.max(np.abs(rescaled.rho / divisor - original.rho)),
        np.max(np.abs(rescaled.p / divisor - original.p)),
    ))
    logger.info("%s %s scale x%g: deviation %.3e", spec.label, mode.value, ratio, deviation)
    return ScaleCheckResult(spec.label, mode, ratio, deviation)


__all__ = ["ScaleMode", "ScaleCheckResult", "scale_independence_check"]
