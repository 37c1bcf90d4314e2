"""Relative cost of schemes on a fixed number of 2-D Riemann steps."""
import logging
import time
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence

from src.config import TIMING_STEPS
from src.models.weights import SchemeSpec, SchemeTag
from src.solver.cases import CaseConfig, CaseTag
from src.solver.solver import advance, initial_state, stable_dt

logger = logging.getLogger(__name__)

BASELINE = SchemeSpec(SchemeTag.JS3)


@dataclass(frozen=True)
class TimingRow:
    scheme: str
    seconds: float
    relative: float


def relative_timing(schemes: Sequence[SchemeSpec], steps: int = TIMING_STEPS,
                    n: Optional[int] = None, workers: int = 1) -> List[TimingRow]:
    """
    Wall time of ``steps`` steps per scheme, normalized so JS3 = 100.

    Every scheme takes the same fixed dt (the stable step of the initial
    state), so each run does identical work apart from the weights. JS3 is
    timed first and added if absent.
    """
    schemes = list(schemes)
    if BASELINE not in schemes:
        schemes.insert(0, BASELINE)
    else:
        schemes.insert(0, schemes.pop(schemes.index(BASELINE)))

    probe = CaseConfig(CaseTag.RIEMANN2D, BASELINE, n=n, ny=n)
    dt = stable_dt(initial_state(probe), probe)

    rows, baseline_seconds = [], None
    for spec in schemes:
        cfg = replace(probe, scheme=spec, cfl=None, dt=dt, end_time=steps * dt)
        state = initial_state(cfg)
        start = time.perf_counter()
        advance(state, cfg, workers=workers)
        seconds = time.perf_counter() - start
        if baseline_seconds is None:
            baseline_seconds = seconds
        rows.append(TimingRow(spec.label, seconds, 100.0 * seconds / baseline_seconds))
        logger.info("%s: %d steps in %.3f s (%.2f)", spec.label, steps, seconds, rows[-1].relative)
    return rows


__all__ = ["TimingRow", "relative_timing"]
