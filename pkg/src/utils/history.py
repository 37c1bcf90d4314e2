"""Bounded per-step history of a solver run."""
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Optional, Tuple


@dataclass(frozen=True)
class StepRecord:
    """State summary after one accepted time step."""
    step: int
    time: float
    dt: float
    min_rho: Optional[float] = None
    min_p: Optional[float] = None


class StepHistory:
    """
    Keeps the most recent steps of a run plus the run-wide minima.

    Only the last ``max_size`` records are retained; the minima and the step
    count cover the whole run.
    """

    def __init__(self, max_size: int = 1000):
        """
        Initialize the history.

        Args:
            max_size: Maximum number of step records to keep
        """
        self.max_size = max_size
        self.records: Deque[StepRecord] = deque(maxlen=max_size)
        self.steps = 0
        self.min_rho: Optional[float] = None
        self.min_p: Optional[float] = None

    def record_step(self, record: StepRecord):
        """Record one accepted step and update the minima."""
        self.records.append(record)
        self.steps = max(self.steps, record.step)
        if record.min_rho is not None:
            self.min_rho = record.min_rho if self.min_rho is None else min(self.min_rho, record.min_rho)
        if record.min_p is not None:
            self.min_p = record.min_p if self.min_p is None else min(self.min_p, record.min_p)

    def last(self) -> Optional[StepRecord]:
        """Return the most recent record, or None if nothing was recorded."""
        return self.records[-1] if self.records else None

    def minima(self) -> Tuple[Optional[float], Optional[float]]:
        """Return (min rho, min p) over the whole run."""
        return self.min_rho, self.min_p

    def as_rows(self) -> List[Tuple]:
        """Retained records as plain tuples, oldest first."""
        return [(r.step, r.time, r.dt, r.min_rho, r.min_p) for r in self.records]

    def clear(self):
        """Clear all history."""
        self.records.clear()
        self.steps = 0
        self.min_rho = None
        self.min_p = None
