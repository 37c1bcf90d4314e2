"""Grid-convergence studies on the scalar advection cases."""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from src.config import CFL_ADVECTION, CONVERGENCE_N_LIST
from src.errors import FailureRecord, RobustnessFailure
from src.models.weights import SchemeSpec
from src.solver.cases import ADVECTION_CASES, CaseConfig, CaseTag, exact_solution
from src.solver.solver import error_norms, run_case

logger = logging.getLogger(__name__)


@dataclass
class ConvergenceRow:
    """One refinement level. Orders are None on the first row or next to a failed row."""
    n: int
    dt: float
    l1_error: Optional[float]
    l1_order: Optional[float]
    linf_error: Optional[float]
    linf_order: Optional[float]
    failure: Optional[FailureRecord] = None

    @property
    def failed(self) -> bool:
        return self.failure is not None


@dataclass
class ConvergenceReport:
    """Errors and observed orders of one scheme on one case, rows sorted by N."""
    scheme: str
    case: str
    cfl: float
    shift: Optional[float]
    rows: List[ConvergenceRow] = field(default_factory=list)

    def row(self, n: int) -> ConvergenceRow:
        for row in self.rows:
            if row.n == n:
                return row
        raise KeyError(f"no row for N={n}")

    def finest_orders(self, count: int = 2, norm: str = "linf") -> List[Optional[float]]:
        """Orders of the ``count`` finest levels in the given norm ("l1" or "linf")."""
        attr = "l1_order" if norm == "l1" else "linf_order"
        return [getattr(row, attr) for row in self.rows[-count:]]

    @property
    def failures(self) -> List[FailureRecord]:
        return [row.failure for row in self.rows if row.failed]


def pairwise_order(coarse: Optional[float], fine: Optional[float]) -> Optional[float]:
    """log2(e_N / e_2N), or None when either error is missing or zero."""
    if coarse is None or fine is None or coarse <= 0.0 or fine <= 0.0:
        return None
    return math.log2(coarse / fine)


def _run_level(spec: SchemeSpec, case: CaseTag, cfl: float, n: int, shift: Optional[float],
               value: float) -> ConvergenceRow:
    cfg = CaseConfig(case, spec, n=n, cfl=cfl, shift=shift, value=value)
    dt = cfg.cfl * cfg.dx
    try:
        state = run_case(cfg)
    except RobustnessFailure as exc:
        return ConvergenceRow(n, dt, None, None, None, None, exc.record)
    l1, linf = error_norms(state.interior, exact_solution(cfg, cfg.end_time))
    logger.info("%s N=%d L1=%.6e Linf=%.6e", cfg.label, n, l1, linf)
    return ConvergenceRow(n, dt, l1, None, linf, None)


def convergence_study(
    spec: SchemeSpec,
    case: CaseTag = CaseTag.SINE_CP,
    cfl: float = CFL_ADVECTION,
    n_list: Sequence[int] = CONVERGENCE_N_LIST,
    shift: Optional[float] = None,
    value: float = 1.0,
    workers: int = 1,
) -> ConvergenceReport:
    """
    Run one scheme over a dyadic list of grids and tabulate errors and orders.

    The exact solution is the initial profile translated by the end time.
    Solver failures become failed rows.

    Args:
        spec: Scheme under test
        case: An advection case (SINE_CP, its unshifted variant via ``shift=0``, or CONSTANT)
        cfl: Courant number, dt = cfl * dx
        n_list: Grid sizes, each double the previous
        shift: Critical-point shift of SINE_CP (None for the default x_c)
        value: Constant of the CONSTANT case
        workers: Levels run concurrently on this many threads

    Returns:
        ConvergenceReport with rows sorted by N
    """
    if case not in ADVECTION_CASES:
        raise ValueError(f"convergence studies need an advection case, got {case.name}")
    n_list = sorted(n_list)
    for coarse, fine in zip(n_list, n_list[1:]):
        if fine != 2 * coarse:
            raise ValueError(f"grid list must be dyadic, got {coarse} then {fine}")

    def task(n):
        return _run_level(spec, case, cfl, n, shift, value)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(task, n_list))
    else:
        rows = [task(n) for n in n_list]

    for previous, row in zip(rows, rows[1:]):
        row.l1_order = pairwise_order(previous.l1_error, row.l1_error)
        row.linf_order = pairwise_order(previous.linf_error, row.linf_error)

    resolved_shift = shift
    if case is CaseTag.SINE_CP:
        resolved_shift = CaseConfig(case, spec, n=n_list[0], cfl=cfl, shift=shift).shift
    return ConvergenceReport(spec.label, case.name, cfl, resolved_shift, rows)


__all__ = ["ConvergenceRow", "ConvergenceReport", "pairwise_order", "convergence_study"]
