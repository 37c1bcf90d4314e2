"""
Case definitions: geometry, defaults, initial data, boundary conditions and
exact solutions for the advection and Euler benchmarks.
"""
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from src.config import (
    BLAST, CFL_ADVECTION, CFL_EULER, COMBO_A, COMBO_ALPHA, COMBO_BETA, COMBO_CFL, COMBO_DELTA,
    COMBO_END_TIME, COMBO_END_TIME_FULL, COMBO_N, COMBO_Z, DMR, ENTROPY_FIX, GAMMA, GHOST_WIDTH,
    MIN_GRID_POINTS, RIEMANN2D, SHU_OSHER, SHU_OSHER_DT, SINE_CP_DOMAIN, SINE_CP_END_TIME,
    SINE_CP_SHIFT, STRONG_SHOCK, STRONG_SHOCK_PR,
)
from src.models.weights import SchemeSpec
from src.solver.euler import AverageMode, conserved
from src.solver.integrators import Integrator


class CaseTag(Enum):
    """Benchmark problems."""
    SINE_CP = "SINE_CP"
    COMBO_WAVES = "COMBO_WAVES"
    CONSTANT = "CONSTANT"
    STRONG_SHOCK = "STRONG_SHOCK"
    BLAST = "BLAST"
    SHU_OSHER = "SHU_OSHER"
    RIEMANN2D = "RIEMANN2D"
    DMR = "DMR"

    @classmethod
    def parse(cls, text: str) -> "CaseTag":
        key = text.strip().upper().replace("-", "_")
        try:
            return cls[key]
        except KeyError:
            valid = ", ".join(tag.name for tag in cls)
            raise ValueError(f"unknown case {text!r} (valid: {valid})") from None


class Boundary(Enum):
    PERIODIC = "periodic"
    OUTFLOW = "outflow"
    REFLECTIVE = "reflective"
    DOUBLE_MACH = "double_mach"


ADVECTION_CASES = frozenset({CaseTag.SINE_CP, CaseTag.COMBO_WAVES, CaseTag.CONSTANT})
TWO_D_CASES = frozenset({CaseTag.RIEMANN2D, CaseTag.DMR})

BOUNDARIES = {
    CaseTag.SINE_CP: Boundary.PERIODIC,
    CaseTag.COMBO_WAVES: Boundary.PERIODIC,
    CaseTag.CONSTANT: Boundary.PERIODIC,
    CaseTag.STRONG_SHOCK: Boundary.OUTFLOW,
    CaseTag.BLAST: Boundary.REFLECTIVE,
    CaseTag.SHU_OSHER: Boundary.OUTFLOW,
    CaseTag.RIEMANN2D: Boundary.OUTFLOW,
    CaseTag.DMR: Boundary.DOUBLE_MACH,
}


@dataclass(frozen=True)
class CaseDefaults:
    domain_x: Tuple[float, float]
    domain_y: Optional[Tuple[float, float]]
    n: int
    ny: Optional[int]
    end_time: float
    cfl: Optional[float]
    dt: Optional[float]
    integrator: Integrator


def case_defaults(case: CaseTag, full_scale: bool = False) -> CaseDefaults:
    """Default geometry and time stepping for ``case`` (desk scale unless ``full_scale``)."""
    if case is CaseTag.SINE_CP:
        return CaseDefaults(SINE_CP_DOMAIN, None, 160, None, SINE_CP_END_TIME,
                            CFL_ADVECTION, None, Integrator.RK4)
    if case is CaseTag.CONSTANT:
        return CaseDefaults(SINE_CP_DOMAIN, None, 40, None, SINE_CP_END_TIME,
                            CFL_ADVECTION, None, Integrator.RK4)
    if case is CaseTag.COMBO_WAVES:
        end = COMBO_END_TIME_FULL if full_scale else COMBO_END_TIME
        return CaseDefaults(SINE_CP_DOMAIN, None, COMBO_N, None, end,
                            COMBO_CFL, None, Integrator.TVDRK3)
    if case in (CaseTag.STRONG_SHOCK, CaseTag.BLAST, CaseTag.SHU_OSHER):
        domain, n, end = {CaseTag.STRONG_SHOCK: STRONG_SHOCK, CaseTag.BLAST: BLAST,
                          CaseTag.SHU_OSHER: SHU_OSHER}[case]
        if case is CaseTag.SHU_OSHER:
            return CaseDefaults(domain, None, n, None, end, None, SHU_OSHER_DT, Integrator.TVDRK3)
        return CaseDefaults(domain, None, n, None, end, CFL_EULER, None, Integrator.TVDRK3)
    domain_x, domain_y, desk, full, end = RIEMANN2D if case is CaseTag.RIEMANN2D else DMR
    nx, ny = full if full_scale else desk
    return CaseDefaults(domain_x, domain_y, nx, ny, end, CFL_EULER, None, Integrator.TVDRK3)


@dataclass(frozen=True)
class CaseConfig:
    """
    One fully resolved run: case, grid, time stepping and scheme.

    Unset fields take the case defaults. ``variable_scale`` multiplies the
    initial density and pressure; ``length_scale`` stretches the domain (and
    with it the default end time).
    """
    case: CaseTag
    scheme: SchemeSpec
    n: Optional[int] = None
    ny: Optional[int] = None
    end_time: Optional[float] = None
    cfl: Optional[float] = None
    dt: Optional[float] = None
    integrator: Optional[Integrator] = None
    shift: Optional[float] = None
    value: float = 1.0
    full_scale: bool = False
    average: AverageMode = AverageMode.ARITHMETIC
    entropy_fix: float = ENTROPY_FIX
    gamma: float = GAMMA
    variable_scale: float = 1.0
    length_scale: float = 1.0

    def __post_init__(self):
        defaults = case_defaults(self.case, self.full_scale)
        if self.cfl is not None and self.dt is not None:
            raise ValueError("set either cfl or dt, not both")
        if self.cfl is None and self.dt is None:
            object.__setattr__(self, "cfl", defaults.cfl)
            object.__setattr__(self, "dt", defaults.dt)
        step = self.cfl if self.cfl is not None else self.dt
        if not (np.isfinite(step) and step > 0):
            raise ValueError(f"cfl/dt must be positive, got {step}")
        for name, default in (("n", defaults.n), ("ny", defaults.ny)):
            if getattr(self, name) is None:
                object.__setattr__(self, name, default)
        if self.n < MIN_GRID_POINTS or (self.ny is not None and self.ny < MIN_GRID_POINTS):
            raise ValueError(f"grids need at least {MIN_GRID_POINTS} points, got n={self.n}, ny={self.ny}")
        if self.case not in TWO_D_CASES and self.ny is not None:
            raise ValueError(f"{self.case.name} is one-dimensional; ny must be unset")
        if self.end_time is None:
            object.__setattr__(self, "end_time", defaults.end_time * self.length_scale)
        if not (np.isfinite(self.end_time) and self.end_time > 0):
            raise ValueError(f"end time must be positive, got {self.end_time}")
        if self.integrator is None:
            object.__setattr__(self, "integrator", defaults.integrator)
        if self.case is CaseTag.SINE_CP and self.shift is None:
            object.__setattr__(self, "shift", SINE_CP_SHIFT)
        if self.variable_scale <= 0 or self.length_scale <= 0:
            raise ValueError("variable and length scales must be positive")

    @property
    def is_advection(self) -> bool:
        return self.case in ADVECTION_CASES

    @property
    def is_two_d(self) -> bool:
        return self.case in TWO_D_CASES

    @property
    def nvar(self) -> int:
        if self.is_advection:
            return 1
        return 4 if self.is_two_d else 3

    @property
    def boundary(self) -> Boundary:
        return BOUNDARIES[self.case]

    @property
    def domain_x(self) -> Tuple[float, float]:
        a, b = case_defaults(self.case).domain_x
        return a * self.length_scale, b * self.length_scale

    @property
    def domain_y(self) -> Optional[Tuple[float, float]]:
        domain = case_defaults(self.case).domain_y
        if domain is None:
            return None
        return domain[0] * self.length_scale, domain[1] * self.length_scale

    @property
    def dx(self) -> float:
        a, b = self.domain_x
        return (b - a) / self.n

    @property
    def dy(self) -> Optional[float]:
        if self.domain_y is None:
            return None
        return (self.domain_y[1] - self.domain_y[0]) / self.ny

    @property
    def label(self) -> str:
        return f"{self.case.name}/{self.scheme.label}"


def axis_coordinates(start: float, spacing: float, count: int, node_based: bool,
                     ghost: int = 0) -> np.ndarray:
    """Coordinates of ``count`` points plus ``ghost`` extra points on each side."""
    index = np.arange(-ghost, count + ghost, dtype=float)
    return start + (index if node_based else index + 0.5) * spacing


def grid(cfg: CaseConfig, ghost: int = 0):
    """
    Grid coordinates of a case.

    Advection grids are node-based (x_i = a + i*dx, so x = 0 is a node);
    Euler grids are cell-centred.

    Returns:
        x for 1-D cases, (x, y) for 2-D cases
    """
    x = axis_coordinates(cfg.domain_x[0], cfg.dx, cfg.n, cfg.is_advection, ghost)
    if not cfg.is_two_d:
        return x
    y = axis_coordinates(cfg.domain_y[0], cfg.dy, cfg.ny, False, ghost)
    return x, y


def sine_cp_profile(x: np.ndarray, shift: float) -> np.ndarray:
    """Sinusoidal-like wave with first-order critical points."""
    phase = np.pi * (x - shift)
    return np.sin(phase - np.sin(phase) / np.pi)


def combo_waves_profile(x: np.ndarray) -> np.ndarray:
    """Gaussian, square, triangle and ellipse pulses on [-1, 1]."""
    def gauss(z):
        return np.exp(-COMBO_BETA * (x - z) ** 2)

    def ellipse(a):
        return np.sqrt(np.maximum(1.0 - COMBO_ALPHA ** 2 * (x - a) ** 2, 0.0))

    u = np.zeros_like(x)
    mask = (x >= -0.8) & (x <= -0.6)
    smooth = (gauss(COMBO_Z - COMBO_DELTA) + gauss(COMBO_Z + COMBO_DELTA) + 4.0 * gauss(COMBO_Z)) / 6.0
    u = np.where(mask, smooth, u)
    u = np.where((x >= -0.4) & (x <= -0.2), 1.0, u)
    u = np.where((x >= 0.0) & (x <= 0.2), 1.0 - np.abs(10.0 * (x - 0.1)), u)
    bumps = (ellipse(COMBO_A - COMBO_DELTA) + ellipse(COMBO_A + COMBO_DELTA) + 4.0 * ellipse(COMBO_A)) / 6.0
    return np.where((x >= 0.4) & (x <= 0.6), bumps, u)


def advection_profile(cfg: CaseConfig, x: np.ndarray) -> np.ndarray:
    if cfg.case is CaseTag.SINE_CP:
        return sine_cp_profile(x, cfg.shift)
    if cfg.case is CaseTag.COMBO_WAVES:
        return combo_waves_profile(x)
    return np.full_like(x, cfg.value, dtype=float)


def exact_solution(cfg: CaseConfig, t: float) -> np.ndarray:
    """Exact solution of u_t + u_x = 0: the initial profile translated periodically by t."""
    if not cfg.is_advection:
        raise ValueError(f"{cfg.case.name} has no closed-form solution")
    a, b = cfg.domain_x
    x = grid(cfg)
    moved = a + np.mod(x - t - a, b - a)
    return advection_profile(cfg, moved)


def _euler_1d(cfg: CaseConfig, x: np.ndarray):
    x = x / cfg.length_scale
    rho = np.ones_like(x)
    u = np.zeros_like(x)
    if cfg.case is CaseTag.STRONG_SHOCK:
        p = np.where(x < 0.0, 0.1 * STRONG_SHOCK_PR, 0.1)
    elif cfg.case is CaseTag.BLAST:
        p = np.where(x < 0.1, 1000.0, np.where(x <= 0.9, 0.01, 100.0))
    else:
        left = x < -4.0
        rho = np.where(left, 3.857143, 1.0 + 0.2 * np.sin(5.0 * x))
        u = np.where(left, 2.629369, 0.0)
        p = np.where(left, 10.3333, 1.0)
    return rho, u, np.zeros_like(x), p


# (rho, u, v, p) per quadrant: upper right, upper left, lower left, lower right
RIEMANN2D_STATES = (
    (1.5, 0.0, 0.0, 1.5),
    (0.5323, 1.206, 0.0, 0.3),
    (0.138, 1.206, 1.206, 0.029),
    (0.5323, 0.0, 1.206, 0.3),
)
RIEMANN2D_SPLIT = 0.8

DMR_POST_SHOCK = (8.0, 8.25 * math.cos(math.pi / 6.0), -8.25 * math.sin(math.pi / 6.0), 116.5)
DMR_PRE_SHOCK = (1.4, 0.0, 0.0, 1.0)
DMR_WALL_START = 1.0 / 6.0


def dmr_shock_position(y, t: float, length_scale: float = 1.0):
    """x position of the incident shock at height y and time t."""
    return DMR_WALL_START * length_scale + (y + 20.0 * t) / math.sqrt(3.0)


def _euler_2d(cfg: CaseConfig, x: np.ndarray, y: np.ndarray):
    X, Y = np.meshgrid(x, y, indexing="ij")
    if cfg.case is CaseTag.RIEMANN2D:
        split = RIEMANN2D_SPLIT * cfg.length_scale
        right, top = X >= split, Y >= split
        quadrant = np.where(top, np.where(right, 0, 1), np.where(right, 3, 2))
        table = np.array(RIEMANN2D_STATES)
        states = table[quadrant]
        return tuple(states[..., i] for i in range(4))
    behind = X < dmr_shock_position(Y, 0.0, cfg.length_scale)
    post, pre = np.array(DMR_POST_SHOCK), np.array(DMR_PRE_SHOCK)
    states = np.where(behind[..., None], post, pre)
    return tuple(states[..., i] for i in range(4))


def initial_condition(cfg: CaseConfig) -> np.ndarray:
    """
    Interior initial data.

    Returns:
        (N,) for advection, (N, 3) for 1-D Euler, (Nx, Ny, 4) for 2-D Euler
    """
    coords = grid(cfg)
    if cfg.is_advection:
        return advection_profile(cfg, coords)
    if cfg.is_two_d:
        rho, u, v, p = _euler_2d(cfg, *coords)
    else:
        rho, u, v, p = _euler_1d(cfg, coords)
    r = cfg.variable_scale
    return conserved(rho * r, u, v, p * r, cfg.gamma, two_d=cfg.is_two_d)


def _fill_axis(padded: np.ndarray, axis: int, boundary: Boundary, normal: Optional[int],
               ghost: int = GHOST_WIDTH):
    data = np.moveaxis(padded, axis, 0)
    n = data.shape[0] - 2 * ghost
    if boundary is Boundary.PERIODIC:
        data[:ghost] = data[n:n + ghost]
        data[n + ghost:] = data[ghost:2 * ghost]
    elif boundary is Boundary.OUTFLOW:
        data[:ghost] = data[ghost]
        data[n + ghost:] = data[n + ghost - 1]
    else:
        for i in range(ghost):
            data[ghost - 1 - i] = data[ghost + i]
            data[n + ghost + i] = data[n + ghost - 1 - i]
        if normal is not None:
            data[:ghost, ..., normal] *= -1.0
            data[n + ghost:, ..., normal] *= -1.0


def _fill_double_mach(padded: np.ndarray, cfg: CaseConfig, t: float, ghost: int = GHOST_WIDTH):
    post = conserved(*DMR_POST_SHOCK, gamma=cfg.gamma, two_d=True) * cfg.variable_scale
    pre = conserved(*DMR_PRE_SHOCK, gamma=cfg.gamma, two_d=True) * cfg.variable_scale
    nx, ny = cfg.n, cfg.ny
    x, _ = grid(cfg, ghost)

    # left: post-shock inflow; right: zero-gradient outflow
    padded[:ghost] = post
    padded[nx + ghost:] = padded[nx + ghost - 1]

    # bottom: post-shock state ahead of the wedge, reflecting wall behind it
    for i in range(ghost):
        padded[:, ghost - 1 - i] = padded[:, ghost + i]
    padded[:, :ghost, 2] *= -1.0
    padded[x < DMR_WALL_START * cfg.length_scale, :ghost] = post

    # top: exact position of the moving incident shock
    behind = x < dmr_shock_position(cfg.domain_y[1], t, cfg.length_scale)
    padded[:, ny + ghost:] = np.where(behind[:, None, None], post, pre)


def fill_ghosts(padded: np.ndarray, cfg: CaseConfig, t: float) -> np.ndarray:
    """
    Apply the case's boundary conditions to the ghost layers of ``padded`` in place.

    Advection arrays are (N+2G,), 1-D Euler (N+2G, 3), 2-D Euler (Nx+2G, Ny+2G, 4).
    """
    boundary = cfg.boundary
    if boundary is Boundary.DOUBLE_MACH:
        _fill_double_mach(padded, cfg, t)
        return padded
    if cfg.is_two_d:
        _fill_axis(padded, 0, boundary, 1)
        _fill_axis(padded, 1, boundary, 2)
    else:
        _fill_axis(padded, 0, boundary, None if cfg.is_advection else 1)
    return padded


__all__ = [
    "CaseTag", "Boundary", "ADVECTION_CASES", "TWO_D_CASES", "CaseDefaults", "case_defaults",
    "CaseConfig", "grid", "axis_coordinates", "sine_cp_profile", "combo_waves_profile",
    "advection_profile", "exact_solution", "initial_condition", "fill_ghosts",
    "RIEMANN2D_STATES", "DMR_POST_SHOCK", "DMR_PRE_SHOCK", "dmr_shock_position",
]
