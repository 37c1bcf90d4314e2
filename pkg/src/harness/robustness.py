"""Robustness matrix: which schemes finish the shock benchmarks with positive rho and p."""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import product
from typing import List, Optional, Sequence

from src.errors import FailureRecord, RobustnessFailure
from src.models.weights import SchemeSpec, SchemeTag
from src.solver.cases import CaseConfig, CaseTag
from src.solver.solver import run_case
from src.utils.history import StepHistory

logger = logging.getLogger(__name__)

ROBUSTNESS_CASES = (
    CaseTag.STRONG_SHOCK, CaseTag.BLAST, CaseTag.SHU_OSHER, CaseTag.RIEMANN2D, CaseTag.DMR,
)
ROBUSTNESS_SCHEMES = (
    SchemeSpec(SchemeTag.JS3), SchemeSpec(SchemeTag.Z3), SchemeSpec(SchemeTag.ZM3),
    SchemeSpec(SchemeTag.PPLUS3), SchemeSpec(SchemeTag.ZES3),
)
# Schemes whose completion is asserted; the rest are observations only
ASSERTED = frozenset({SchemeTag.JS3, SchemeTag.Z3, SchemeTag.ZM3})


@dataclass(frozen=True)
class RobustnessObservation:
    """Outcome of one (scheme, case) run."""
    scheme: str
    case: str
    completed: bool
    asserted: bool
    steps: int
    min_rho: Optional[float]
    min_p: Optional[float]
    failure: Optional[FailureRecord] = None

    @property
    def acceptable(self) -> bool:
        """Asserted schemes must complete; observation-only schemes always pass."""
        return self.completed or not self.asserted


def observe(spec: SchemeSpec, case: CaseTag, full_scale: bool = False,
            workers: int = 1) -> RobustnessObservation:
    """Run one case and summarize it without raising."""
    cfg = CaseConfig(case, spec, full_scale=full_scale)
    history = StepHistory()
    asserted = spec.tag in ASSERTED
    try:
        run_case(cfg, history, workers)
    except RobustnessFailure as exc:
        return RobustnessObservation(spec.label, case.name, False, asserted, history.steps,
                                     history.min_rho, history.min_p, exc.record)
    logger.info("%s completed in %d steps (min rho %.4g, min p %.4g)",
                cfg.label, history.steps, history.min_rho, history.min_p)
    return RobustnessObservation(spec.label, case.name, True, asserted, history.steps,
                                 history.min_rho, history.min_p)


def robustness_matrix(
    schemes: Sequence[SchemeSpec] = ROBUSTNESS_SCHEMES,
    cases: Sequence[CaseTag] = ROBUSTNESS_CASES,
    full_scale: bool = False,
    workers: int = 1,
) -> List[RobustnessObservation]:
    """
    Run every scheme on every case.

    Returns:
        Observations in (scheme, case) order, independent of ``workers``
    """
    cells = list(product(schemes, cases))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda cell: observe(cell[0], cell[1], full_scale), cells))
    return [observe(spec, case, full_scale) for spec, case in cells]


__all__ = [
    "ROBUSTNESS_CASES", "ROBUSTNESS_SCHEMES", "RobustnessObservation", "observe",
    "robustness_matrix",
]
