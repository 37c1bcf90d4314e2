"""
Method-of-lines driver.

Builds the conservative flux-difference operator for each case family and
advances a FieldState to the end time.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from src.config import CFL_EULER, GHOST_WIDTH, REFERENCE_GRIDS
from src.errors import (
    FailureRecord, NonPhysicalStateError, RobustnessFailure, StencilError, WeightError,
)
from src.models.weights import SchemeSpec, SchemeTag, scheme_stencil_width
from src.solver.cases import CaseConfig, CaseTag, fill_ghosts, grid, initial_condition
from src.solver.euler import (
    characteristic_project, characteristic_unproject, eigenvectors, interface_average,
    max_signal_speed, primitives, steger_warming_split, swap_momentum,
)
from src.solver.integrators import stepper_for
from src.solver.reconstruction import Wind, interface_windows, reconstruct_grid, reconstruct_interface
from src.utils.history import StepHistory, StepRecord

logger = logging.getLogger(__name__)

G = GHOST_WIDTH


@dataclass
class FieldState:
    """
    Conserved variables on a ghost-padded grid.

    Attributes:
        conserved: (N+2G,) advection, (N+2G, 3) 1-D Euler, (Nx+2G, Ny+2G, 4) 2-D Euler
        dx, dy: Grid spacings (dy is None in 1-D)
        t: Current time
        gamma: Ratio of specific heats (Euler only)
        step: Number of steps taken
    """
    conserved: np.ndarray
    dx: float
    dy: Optional[float] = None
    t: float = 0.0
    gamma: float = 1.4
    step: int = 0

    @property
    def interior(self) -> np.ndarray:
        if self.dy is None:
            return self.conserved[G:-G]
        return self.conserved[G:-G, G:-G]


def initial_state(cfg: CaseConfig) -> FieldState:
    """Pad the case's initial data and fill its ghost layers."""
    inner = initial_condition(cfg)
    pad = [(G, G)] if cfg.is_advection else ([(G, G), (G, G), (0, 0)] if cfg.is_two_d else [(G, G), (0, 0)])
    padded = np.pad(inner, pad)
    fill_ghosts(padded, cfg, 0.0)
    return FieldState(padded, cfg.dx, cfg.dy, 0.0, cfg.gamma)


def _euler_sweep(padded: np.ndarray, spec: SchemeSpec, cfg: CaseConfig, spacing: float) -> np.ndarray:
    """Flux difference -(F_(j+1/2) - F_(j-1/2))/h along axis 0 of a padded array."""
    f_plus, f_minus = steger_warming_split(padded, cfg.gamma, cfg.entropy_fix)
    n = padded.shape[0] - 2 * G
    average = interface_average(padded[G - 1:G + n], padded[G:G + n + 1], cfg.gamma, cfg.average)
    L, R = eigenvectors(average, cfg.gamma, two_d=padded.shape[-1] == 4)
    width = scheme_stencil_width(spec)
    char = 0.0
    for flux, wind in ((f_plus, Wind.POSITIVE), (f_minus, Wind.NEGATIVE)):
        windows = characteristic_project(interface_windows(flux, width, wind), L)
        char = char + reconstruct_interface(windows, spec, wind, spacing)
    hat = characteristic_unproject(char, R)
    return -(hat[1:] - hat[:-1]) / spacing


def spatial_operator(cfg: CaseConfig, workers: int = 1):
    """
    Return rhs(t, padded) giving dU/dt on the interior (ghost entries are zero).

    With ``workers`` > 1 the x and y sweeps of a 2-D step run concurrently;
    they write disjoint arrays and are summed in a fixed order.
    """
    spec = cfg.scheme

    def advection(t: float, padded: np.ndarray) -> np.ndarray:
        work = fill_ghosts(padded.copy(), cfg, t)
        hat = reconstruct_grid(work, None, spec, cfg.dx)
        out = np.zeros_like(padded)
        out[G:-G] = -(hat[1:] - hat[:-1]) / cfg.dx
        return out

    def euler_1d(t: float, padded: np.ndarray) -> np.ndarray:
        work = fill_ghosts(padded.copy(), cfg, t)
        out = np.zeros_like(padded)
        out[G:-G] = _euler_sweep(work, spec, cfg, cfg.dx)
        return out

    def x_sweep(work):
        return _euler_sweep(work[:, G:-G], spec, cfg, cfg.dx)

    def y_sweep(work):
        turned = np.ascontiguousarray(swap_momentum(work[G:-G]).transpose(1, 0, 2))
        return swap_momentum(_euler_sweep(turned, spec, cfg, cfg.dy).transpose(1, 0, 2))

    def euler_2d(t: float, padded: np.ndarray) -> np.ndarray:
        work = fill_ghosts(padded.copy(), cfg, t)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=2) as pool:
                fx, fy = pool.submit(x_sweep, work), pool.submit(y_sweep, work)
                dx_part, dy_part = fx.result(), fy.result()
        else:
            dx_part, dy_part = x_sweep(work), y_sweep(work)
        out = np.zeros_like(padded)
        out[G:-G, G:-G] = dx_part + dy_part
        return out

    if cfg.is_advection:
        return advection
    return euler_2d if cfg.is_two_d else euler_1d


def stable_dt(state: FieldState, cfg: CaseConfig) -> float:
    """Time step from the fixed dt or the CFL condition."""
    if cfg.dt is not None:
        return cfg.dt
    if cfg.is_advection:
        return cfg.cfl * cfg.dx
    speed_x, speed_y = max_signal_speed(state.interior, cfg.gamma)
    if cfg.is_two_d:
        return cfg.cfl / (speed_x / cfg.dx + speed_y / cfg.dy)
    return cfg.cfl * cfg.dx / speed_x


def _failure(cfg: CaseConfig, step: int, t: float, cell=(), reason: str = "") -> RobustnessFailure:
    record = FailureRecord(cfg.case.name, cfg.scheme.label, step, t, tuple(cell), reason)
    logger.warning("robustness failure: %s", record.to_line())
    return RobustnessFailure(record)


def advance(state: FieldState, cfg: CaseConfig, history: Optional[StepHistory] = None,
            workers: int = 1) -> FieldState:
    """
    Advance ``state`` to ``cfg.end_time``.

    The last step is shortened so the run ends exactly at the end time. Every
    Runge-Kutta stage is checked for non-finite values and, for Euler cases,
    for non-positive density or pressure.

    Args:
        state: Initial state (not modified)
        cfg: Case configuration
        history: Receives one record per accepted step
        workers: Worker threads for 2-D sweeps

    Returns:
        New FieldState at the end time

    Raises:
        RobustnessFailure: if the run cannot reach the end time
    """
    rhs = spatial_operator(cfg, workers)
    stepper = stepper_for(cfg.integrator)
    U = state.conserved.copy()
    t, step = state.t, state.step
    end = cfg.end_time
    fixed = cfg.dt is not None or cfg.is_advection
    if fixed:
        base_dt = stable_dt(state, cfg)
        total_steps = step + max(1, math.ceil((end - t) / base_dt - 1e-9))
    logger.debug("advancing %s to t=%g", cfg.label, end)

    def check(values: np.ndarray, stage: int):
        inner = values[G:-G, G:-G] if cfg.is_two_d else values[G:-G]
        if not np.all(np.isfinite(inner)):
            cell = tuple(int(i) for i in np.argwhere(~np.isfinite(inner))[0][: 2 if cfg.is_two_d else 1])
            raise _failure(cfg, step + 1, t, cell, f"non-finite value in stage {stage}")
        if not cfg.is_advection:
            try:
                primitives(inner, cfg.gamma)
            except NonPhysicalStateError as exc:
                raise _failure(cfg, step + 1, t, exc.cell, f"{exc.reason} in stage {stage}") from exc

    current = FieldState(U, state.dx, state.dy, t, state.gamma, step)
    while t < end:
        if fixed:
            dt = base_dt if step + 1 < total_steps else end - t
            if dt <= 0:
                break
        else:
            try:
                dt = min(stable_dt(current, cfg), end - t)
            except NonPhysicalStateError as exc:
                raise _failure(cfg, step + 1, t, exc.cell, exc.reason) from exc
        try:
            U = stepper(U, t, dt, rhs, check)
        except (NonPhysicalStateError, WeightError, StencilError) as exc:
            cell = getattr(exc, "cell", ())
            raise _failure(cfg, step + 1, t, cell, str(exc)) from exc
        step += 1
        last = fixed and step >= total_steps
        t = end if last or t + dt >= end else t + dt
        current = FieldState(U, state.dx, state.dy, t, state.gamma, step)
        if history is not None or logger.isEnabledFor(logging.DEBUG):
            min_rho = min_p = None
            if not cfg.is_advection:
                s = primitives(current.interior, cfg.gamma)
                min_rho, min_p = float(np.min(s.rho)), float(np.min(s.p))
            if history is not None:
                history.record_step(StepRecord(step, t, dt, min_rho, min_p))
            logger.debug("step %d t=%.6g dt=%.3e min_rho=%s min_p=%s", step, t, dt, min_rho, min_p)
    return current


def run_case(cfg: CaseConfig, history: Optional[StepHistory] = None, workers: int = 1) -> FieldState:
    """Build the initial state of ``cfg`` and advance it to the end time."""
    return advance(initial_state(cfg), cfg, history, workers)


def error_norms(numerical, exact, dx: Optional[float] = None) -> Tuple[float, float]:
    """
    L1 and L-infinity norms of the pointwise error.

    L1 is the mean absolute error; passing ``dx`` switches it to sum(|e|)*dx.
    """
    e = np.abs(np.asarray(numerical, dtype=float) - np.asarray(exact, dtype=float))
    l1 = float(np.sum(e) * dx) if dx is not None else float(np.sum(e) / e.size)
    return l1, float(np.max(e))


def reference_solution(case: CaseTag, workers: int = 1, n: Optional[int] = None):
    """
    Fine-grid JS5 solution used as the "exact" reference of a 1-D Euler case.

    Returns:
        (x, interior conserved array)
    """
    if case.name not in REFERENCE_GRIDS:
        raise ValueError(f"no reference grid defined for {case.name}")
    cfg = CaseConfig(case, SchemeSpec(SchemeTag.JS5), n=n or REFERENCE_GRIDS[case.name],
                     cfl=CFL_EULER)
    logger.info("computing reference solution for %s on %d cells", case.name, cfg.n)
    return grid(cfg), run_case(cfg, workers=workers).interior


def sample_reference(ref_x: np.ndarray, ref_values: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Linearly interpolate a reference solution onto coarse-grid points ``x``."""
    ref_values = np.asarray(ref_values, dtype=float)
    if ref_values.ndim == 1:
        return np.interp(x, ref_x, ref_values)
    return np.stack([np.interp(x, ref_x, ref_values[:, k]) for k in range(ref_values.shape[1])], axis=-1)


def with_scheme(cfg: CaseConfig, spec: SchemeSpec) -> CaseConfig:
    """Copy of ``cfg`` using another scheme."""
    return replace(cfg, scheme=spec)


__all__ = [
    "FieldState", "initial_state", "spatial_operator", "stable_dt", "advance", "run_case",
    "error_norms", "reference_solution", "sample_reference", "with_scheme",
]
