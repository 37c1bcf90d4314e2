"""Exception hierarchy shared by every layer of the library."""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


class WenoError(Exception):
    """Base class for all library errors."""


class StencilError(WenoError, ValueError):
    """A stencil window is structurally unusable (caller bug, not a numeric condition)."""


class WeightError(WenoError, ArithmeticError):
    """Non-finite smoothness data reached the weight engine."""

    def __init__(self, quantity: str, index: Tuple[int, ...], value: float):
        self.quantity = quantity
        self.index = index
        self.value = value
        super().__init__(
            f"non-finite {quantity} at {index} (value={value!r}); "
            f"the upstream solution has probably blown up"
        )


class NonPhysicalStateError(WenoError):
    """Density or pressure is not positive where an Euler state is decoded."""

    def __init__(self, cell: Tuple[int, ...], reason: str):
        self.cell = cell
        self.reason = reason
        super().__init__(f"non-physical state at cell {cell}: {reason}")


@dataclass(frozen=True)
class FailureRecord:
    """One robustness failure, rendered as a single structured text line."""
    case: str
    scheme: str
    step: int
    time: float
    cell: Tuple[int, ...] = ()
    reason: str = ""

    def to_line(self) -> str:
        cell = ",".join(str(c) for c in self.cell) if self.cell else "-"
        return (
            f"case={self.case} scheme={self.scheme} step={self.step} "
            f"time={self.time:.17g} cell={cell} reason={self.reason}"
        )


class RobustnessFailure(WenoError):
    """A run could not reach its end time."""

    def __init__(self, record: FailureRecord):
        self.record = record
        super().__init__(record.to_line())


class ConfigError(WenoError, ValueError):
    """A run configuration could not be parsed or validated."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        field: Optional[str] = None,
        valid: Sequence[str] = (),
    ):
        self.line = line
        self.field = field
        self.valid = tuple(valid)
        parts = []
        if line is not None:
            parts.append(f"line {line}")
        if field:
            parts.append(field)
        prefix = f"[{': '.join(parts)}] " if parts else ""
        suffix = f" (valid: {', '.join(self.valid)})" if self.valid else ""
        super().__init__(f"{prefix}{message}{suffix}")


class NullspaceError(WenoError):
    """The nullspace oracle refuses a system whose rank it cannot decide."""

    def __init__(self, message: str, gap_estimate: float):
        self.gap_estimate = gap_estimate
        super().__init__(f"{message} (singular-value gap estimate {gap_estimate:.3e})")


__all__ = [
    "WenoError", "StencilError", "WeightError", "NonPhysicalStateError",
    "FailureRecord", "RobustnessFailure", "ConfigError", "NullspaceError",
]
