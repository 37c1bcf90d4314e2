"""Configuration and constants for the WENO3 reconstruction library."""
import math

# Library identity (embedded into every artifact)
LIBRARY_NAME = "weno3-zm"
LIBRARY_VERSION = "1.0.0"

# Division guards
EPS_Z_FAMILY = 1e-40  # added to every beta (and to tau_P in the P+3 third term)
EPS_JS = 1e-6         # Jiang-Shu weights, third and fifth order
EPS_ZM3_RELATIVE = 1e-6  # ZM3 only, multiplied by the largest squared sample of the window

# Default exponents of the third-order Z improvements
P_NP3 = 1.5
P_F3 = 1.5
P_NN3 = 0.5
P_PZ3 = 0.5
P_Z3 = 1.0

# Admissible exponent ranges (inclusive bounds, None = unbounded)
P_RANGES = {
    "Z3": (1.0, 2.0),
    "NP3": (1.5, None),
    "F3": (1.5, None),
    "NN3": (0.0, 0.75),
    "PZ3": (0.0, 0.5),
}

# Scale of tau_CP2 in WENO3-Z_ES
TAU_CP2_SCALE = 1.0

# P+3 length-scale factor lambda = dx ** (1/6)
PPLUS3_LAMBDA_POWER = 1.0 / 6.0

# Piecewise rational mapping M^3_{2,1;2} for WENO3-ZM, one row per linear weight
MAPPING_N = 2
MAPPING_M = 1
MAPPING_M1 = 2
MAPPING_TABLE = {
    # d_k: (c1, c2, c3)
    0: (1.2, 0.1, 55.0),
    1: (1.2, 0.1, 35.0),
}

# Gas
GAMMA = 1.4

# Grids
GHOST_WIDTH = 3
MIN_GRID_POINTS = 10

# Time stepping
CFL_ADVECTION = 0.4
CFL_EULER = 0.5
ENTROPY_FIX = 0.0  # Steger-Warming eigenvalue smoothing, off by default

# Sinusoidal-like wave with a first-order critical point on a node
SINE_CP_SHIFT = 0.5966831869112089637212
SINE_CP_DOMAIN = (-1.0, 1.0)
SINE_CP_END_TIME = 2.0
CONVERGENCE_N_LIST = (10, 20, 40, 80, 160, 320, 640)

# Combination waves
COMBO_A = 0.5
COMBO_Z = -0.7
COMBO_DELTA = 0.005
COMBO_ALPHA = 10.0
COMBO_BETA = math.log(2.0) / (36.0 * COMBO_DELTA ** 2)
COMBO_N = 800
COMBO_CFL = 0.1
COMBO_END_TIME = 8.0
COMBO_END_TIME_FULL = 4000.0

# 1-D Euler cases: (domain, N, end time)
STRONG_SHOCK_PR = 1.0e6
STRONG_SHOCK = ((-5.0, 5.0), 200, 0.01)
BLAST = ((0.0, 1.0), 200, 0.038)
SHU_OSHER = ((-5.0, 5.0), 240, 1.8)
SHU_OSHER_DT = 0.003

# 2-D Euler cases: (x-domain, y-domain, desk grid, full grid, end time)
RIEMANN2D = ((0.0, 1.0), (0.0, 1.0), (240, 240), (960, 960), 0.8)
DMR = ((0.0, 3.0), (0.0, 1.0), (480, 120), (1920, 480), 0.2)

# Reference ("Exact") solutions by WENO5-JS
REFERENCE_GRIDS = {
    "BLAST": 15001,
    "SHU_OSHER": 10001,
}

# Scale-independence study
SCALE_GRID = 400
SCALE_DT = 0.0015
SCALE_CFL = 0.06
SCALE_R_VAR = 0.1
SCALE_R_DX = 100.0
SCALE_TOLERANCE = 1e-8
SCALE_FAILURE_THRESHOLD = 1e-3

# Order probes
PROBE_LEVELS = (4, 5, 6, 7, 8)  # dx = 2 ** -level
PROBE_DRAWS = 3
PROBE_AGREEMENT = 0.3
PROBE_MAX_RESIDUAL = 0.25

# Proposition sampling
PROPOSITION_SAMPLES = 10_000
PROPOSITION_LOG_RANGE = (-6.0, 2.0)  # log10 bounds for tau and beta magnitudes
PROPOSITION_TIE_ULPS = 8

# Nullspace oracle
NULLSPACE_RANK_TOL = 1e-8
NULLSPACE_AMBIGUOUS_TOL = 1e-4
NULLSPACE_LAMBDA_SAMPLES = 16

# Timing
TIMING_STEPS = 100

# Acceptance bands
ORDER_BAND = (2.9, 3.1)
ORDER_FAILURE_MAX = 2.8

# Reports
ERROR_FORMAT = "{:.17g}"
ORDER_FORMAT = "{:.3f}"
DEFAULT_SEED = 20240917
DEFAULT_OUTPUT = "artifacts"
