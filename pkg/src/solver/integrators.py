"""Explicit Runge-Kutta time steppers for the method of lines."""
from enum import Enum
from typing import Callable, Optional

import numpy as np

Rhs = Callable[[float, np.ndarray], np.ndarray]
StageCheck = Callable[[np.ndarray, int], None]


class Integrator(Enum):
    """Available time integrators."""
    RK4 = "RK4"
    TVDRK3 = "TVDRK3"


class RK4Stepper:
    """Classical four-stage fourth-order Runge-Kutta."""

    def __call__(self, y: np.ndarray, t: float, dt: float, rhs: Rhs,
                 check: Optional[StageCheck] = None) -> np.ndarray:
        k1 = rhs(t, y)
        stage = y + 0.5 * dt * k1
        if check:
            check(stage, 1)
        k2 = rhs(t + 0.5 * dt, stage)
        stage = y + 0.5 * dt * k2
        if check:
            check(stage, 2)
        k3 = rhs(t + 0.5 * dt, stage)
        stage = y + dt * k3
        if check:
            check(stage, 3)
        k4 = rhs(t + dt, stage)
        result = y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if check:
            check(result, 4)
        return result


class TVDRK3Stepper:
    """Three-stage third-order TVD (strong-stability-preserving) Runge-Kutta."""

    def __call__(self, y: np.ndarray, t: float, dt: float, rhs: Rhs,
                 check: Optional[StageCheck] = None) -> np.ndarray:
        stage = y + dt * rhs(t, y)
        if check:
            check(stage, 1)
        stage = 0.75 * y + 0.25 * (stage + dt * rhs(t + dt, stage))
        if check:
            check(stage, 2)
        result = y / 3.0 + 2.0 / 3.0 * (stage + dt * rhs(t + 0.5 * dt, stage))
        if check:
            check(result, 3)
        return result


def stepper_for(integrator: Integrator):
    """Return a stepper instance for ``integrator``."""
    return RK4Stepper() if integrator is Integrator.RK4 else TVDRK3Stepper()


__all__ = ["Integrator", "RK4Stepper", "TVDRK3Stepper", "stepper_for"]
