"""
Acceptance verdicts.

Each criterion runs the studies it needs and returns a Verdict; the runner
turns the verdicts into a summary file and an exit status.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.config import DEFAULT_SEED, ORDER_BAND, ORDER_FAILURE_MAX, SCALE_FAILURE_THRESHOLD
from src.harness.convergence import ConvergenceReport, convergence_study
from src.harness.nullspace import forms_match, quadratic_form_nullspace, tau_cp1_form
from src.harness.probes import QuantityTag, acp_order_probe
from src.harness.propositions import proposition_check
from src.harness.robustness import robustness_matrix
from src.harness.scaling import ScaleMode, scale_independence_check
from src.models.indicators import TauKind, TauTag, check_tau_forms, tau, tau_cp1_combination
from src.models.stencil import StencilWindow
from src.models.weights import SchemeSpec, SchemeTag
from src.solver.euler import (
    characteristic_project, characteristic_unproject, conserved, eigenvectors, physical_flux,
    primitives, steger_warming_split,
)
from src.solver.reconstruction import weights_for_window
from src.errors import NullspaceError

logger = logging.getLogger(__name__)

TABLE_LINF_640 = 2.0047e-6
TABLE_LINF_FACTOR = 1.5
Z3_PLATEAU = (1.3, 1.7)
PROBE_TOLERANCE = 0.3
IDENTITY_SAMPLES = 100_000
IDENTITY_RTOL = 1e-12
# Failure bound for the finest L-infinity order in the CFL/exponent sensitivity checks
SENSITIVITY_FAILURE_MAX = 2.7
UNSHIFTED = 0.0

ZM3 = SchemeSpec(SchemeTag.ZM3)
ZES3 = SchemeSpec(SchemeTag.ZES3)

PROBE_CELLS = (
    # quantity, lam, critical-point order, expected slope
    (QuantityTag.BETA2_0, 0.3, 1, 4),
    (QuantityTag.BETA2_0, -0.5, 1, 6),
    (QuantityTag.TAU3, 0.3, 1, 4),
    (QuantityTag.TAU3, 0.0, 1, 5),
    (QuantityTag.TAU_CP1, 0.0, 1, 5),
    (QuantityTag.TAU_CP1, -0.5, 1, 7),
    (QuantityTag.D42_SQ, 0.0, 0, 8),
    (QuantityTag.D42_SQ, 0.0, 1, 8),
    (QuantityTag.D42_SQ, 0.0, 2, 8),
)


@dataclass
class Verdict:
    """Outcome of one acceptance criterion."""
    criterion: int
    title: str
    passed: bool = True
    details: List[str] = field(default_factory=list)
    reports: List[ConvergenceReport] = field(default_factory=list)

    def check(self, condition: bool, message: str) -> bool:
        """Record one assertion; a failed one fails the verdict."""
        self.details.append(("PASS " if condition else "FAIL ") + message)
        if not condition:
            self.passed = False
        return condition

    def note(self, message: str):
        """Record an observation that does not affect the verdict."""
        self.details.append("NOTE " + message)


class AcceptanceContext:
    """Shared settings and a cache of convergence studies used by several criteria."""

    def __init__(self, seed: int = DEFAULT_SEED, workers: int = 1, full_scale: bool = False):
        self.seed = seed
        self.workers = workers
        self.full_scale = full_scale
        self._studies: Dict[Tuple, ConvergenceReport] = {}

    def study(self, spec: SchemeSpec, cfl: float, shift: Optional[float] = None) -> ConvergenceReport:
        key = (spec, cfl, shift)
        if key not in self._studies:
            self._studies[key] = convergence_study(spec, cfl=cfl, shift=shift, workers=self.workers)
        return self._studies[key]


def _in_band(value: Optional[float]) -> bool:
    return value is not None and ORDER_BAND[0] <= value <= ORDER_BAND[1]


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def _finest_linf(report: ConvergenceReport) -> Optional[float]:
    return report.rows[-1].linf_order


def criterion_optimal_order_cfl04(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(1, "ZM3 and ZES3 reach third order at CFL 0.4")
    for spec in (ZM3, ZES3):
        report = ctx.study(spec, 0.4)
        verdict.reports.append(report)
        for norm in ("l1", "linf"):
            orders = report.finest_orders(2, norm)
            verdict.check(all(_in_band(o) for o in orders),
                          f"{spec.label} {norm} orders at N=320,640: {[_fmt(o) for o in orders]}")
        error = report.rows[-1].linf_error
        verdict.check(
            error is not None and TABLE_LINF_640 / TABLE_LINF_FACTOR <= error <= TABLE_LINF_640 * TABLE_LINF_FACTOR,
            f"{spec.label} Linf error at N=640: {error}",
        )
    return verdict


def criterion_optimal_order_cfl025(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(2, "ZM3 and ZES3 keep third order at CFL 0.25; NN3 does not")
    for spec in (ZM3, ZES3):
        report = ctx.study(spec, 0.25)
        verdict.reports.append(report)
        order = _finest_linf(report)
        verdict.check(order is not None and order >= ORDER_BAND[0],
                      f"{spec.label} finest Linf order {_fmt(order)}")
    nn3 = ctx.study(SchemeSpec(SchemeTag.NN3, p=0.5), 0.25)
    verdict.reports.append(nn3)
    order = _finest_linf(nn3)
    verdict.check(order is not None and order <= ORDER_FAILURE_MAX,
                  f"{nn3.scheme} finest Linf order {_fmt(order)} (expected failure)")
    return verdict


def criterion_z3_contrast(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(3, "Z3 plateaus near 1.5; NP3 with tau3 recovers L1 order")
    z3 = ctx.study(SchemeSpec(SchemeTag.Z3), 0.4, UNSHIFTED)
    verdict.reports.append(z3)
    order = _finest_linf(z3)
    verdict.check(order is not None and Z3_PLATEAU[0] <= order <= Z3_PLATEAU[1],
                  f"{z3.scheme} Linf order at N=640: {_fmt(order)}")
    variant = ctx.study(SchemeSpec(SchemeTag.NP3, tau=TauTag.TAU3), 0.4, UNSHIFTED)
    verdict.reports.append(variant)
    orders = variant.finest_orders(2, "l1")
    verdict.check(all(o is not None and o >= ORDER_FAILURE_MAX for o in orders),
                  f"{variant.scheme} L1 orders at N=320,640: {[_fmt(o) for o in orders]}")
    return verdict


def criterion_sensitivity(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(4, "CFL and exponent sensitivity of NN3, F3 and PZ3")
    nn3_fail = ctx.study(SchemeSpec(SchemeTag.NN3, p=0.75), 0.4, UNSHIFTED)
    nn3_pass = ctx.study(SchemeSpec(SchemeTag.NN3, p=0.5), 0.4, UNSHIFTED)
    verdict.reports += [nn3_fail, nn3_pass]
    order = _finest_linf(nn3_fail)
    verdict.check(order is not None and order <= SENSITIVITY_FAILURE_MAX,
                  f"{nn3_fail.scheme} finest Linf order {_fmt(order)} (expected failure)")
    order = _finest_linf(nn3_pass)
    verdict.check(order is not None and order >= ORDER_BAND[0],
                  f"{nn3_pass.scheme} finest Linf order {_fmt(order)}")
    for tag in (SchemeTag.F3, SchemeTag.PZ3):
        spec = SchemeSpec(tag)
        passing, failing = ctx.study(spec, 0.4), ctx.study(spec, 0.25)
        verdict.reports += [passing, failing]
        order = _finest_linf(passing)
        verdict.check(_in_band(order), f"{spec.label} CFL 0.4 finest Linf order {_fmt(order)}")
        order = _finest_linf(failing)
        verdict.check(order is not None and order <= SENSITIVITY_FAILURE_MAX,
                      f"{spec.label} CFL 0.25 finest Linf order {_fmt(order)} (expected failure)")
        verdict.note(f"{spec.label} CFL 0.25 finest L1 order {_fmt(failing.rows[-1].l1_order)}")
    return verdict


def criterion_probes(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(5, "Indicator orders near critical points")
    for quantity, lam, cp_order, expected in PROBE_CELLS:
        result = acp_order_probe(quantity, lam, cp_order, ctx.seed)
        verdict.check(result.conclusive and abs(result.slope - expected) <= PROBE_TOLERANCE,
                      f"{quantity.name} lam={lam:g} CP{cp_order}: slope {result.slope:.3f} "
                      f"(expected {expected}, residual {result.residual:.3g})")
    return verdict


def criterion_nullspace(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(6, "Quadratic-form nullspace")
    try:
        three = quadratic_form_nullspace(3, seed=ctx.seed)
        four = quadratic_form_nullspace(4, seed=ctx.seed)
    except NullspaceError as exc:
        verdict.check(False, str(exc))
        return verdict
    verdict.check(three.dimension == 0, f"3 points: dimension {three.dimension}")
    verdict.check(four.dimension == 1, f"4 points: dimension {four.dimension}")
    if four.dimension == 1:
        verdict.check(forms_match(four.basis[0], tau_cp1_form(), 1e-6),
                      "4 points: basis matches the tau_CP1 form")
        verdict.check(four.residual < 1e-8, f"4 points: residual {four.residual:.2e}")
    return verdict


def criterion_propositions(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(7, "Weight-ratio propositions")
    for prop_id in (1, 2, 3, 4):
        result = proposition_check(prop_id, seed=ctx.seed)
        verdict.check(result.ok, f"proposition {prop_id}: {len(result.counterexamples)} "
                                 f"counterexamples, {result.ties} ties in {result.samples}")
        for counterexample in result.counterexamples[:10]:
            verdict.details.append("  " + counterexample.to_line())
    return verdict


def _random_states(rng: np.random.Generator, size: int, two_d: bool) -> np.ndarray:
    rho = 10.0 ** rng.uniform(-2, 1, size)
    p = 10.0 ** rng.uniform(-2, 2, size)
    u = rng.uniform(-5, 5, size)
    v = rng.uniform(-5, 5, size) if two_d else np.zeros(size)
    return conserved(rho, u, v, p, two_d=two_d)


def identity_gaps(samples: int = IDENTITY_SAMPLES, seed: int = DEFAULT_SEED) -> Dict[str, float]:
    """
    Largest relative violation of each algebraic identity over random inputs.

    Keys: tau_cp1_forms, reduced_tau_forms, weight_sum, steger_warming, characteristic.
    """
    rng = np.random.default_rng(seed)
    gaps = {}

    window = StencilWindow(rng.uniform(-1.0, 1.0, (4, samples)), 1)
    factored = tau(window, TauKind(TauTag.TAU_CP1))
    combined = tau_cp1_combination(window)
    gaps["tau_cp1_forms"] = float(np.max(np.abs(factored - combined) / np.maximum(factored, 1.0)))

    gaps["reduced_tau_forms"] = check_tau_forms(StencilWindow(rng.uniform(-1.0, 1.0, (3, samples)), 1))

    worst = 0.0
    wide = rng.uniform(-1.0, 1.0, (5, samples))
    for tag in SchemeTag:
        spec = SchemeSpec(tag)
        width = 5 if tag in (SchemeTag.ZES3, SchemeTag.JS5) else (4 if tag is SchemeTag.ZM3 else 3)
        values = wide[:width] if width != 3 else wide[1:4]
        omega = weights_for_window(StencilWindow.centered(values, dx=0.01), spec)
        worst = max(worst, float(np.max(np.abs(np.sum(omega, axis=0) - 1.0))))
    gaps["weight_sum"] = worst

    worst = 0.0
    for two_d in (False, True):
        U = _random_states(rng, samples, two_d)
        f_plus, f_minus = steger_warming_split(U)
        flux = physical_flux(U)
        scale = np.maximum(np.abs(flux), 1.0)
        worst = max(worst, float(np.max(np.abs(f_plus + f_minus - flux) / scale)))
    gaps["steger_warming"] = worst

    worst = 0.0
    for two_d in (False, True):
        U = _random_states(rng, samples, two_d)
        L, R = eigenvectors(primitives(U), two_d=two_d)
        values = rng.uniform(-1.0, 1.0, U.shape)
        back = characteristic_unproject(characteristic_project(values, L), R)
        worst = max(worst, float(np.max(np.abs(back - values))))
    gaps["characteristic"] = worst
    return gaps


IDENTITY_TOLERANCES = {
    "tau_cp1_forms": IDENTITY_RTOL,
    "reduced_tau_forms": IDENTITY_RTOL,
    "weight_sum": 1e-13,
    "steger_warming": IDENTITY_RTOL,
    "characteristic": 1e-9,
}


def criterion_identities(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(8, "Algebraic identities")
    for name, gap in identity_gaps(seed=ctx.seed).items():
        verdict.check(gap <= IDENTITY_TOLERANCES[name], f"{name}: largest gap {gap:.3e}")
    return verdict


def criterion_scaling(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(9, "Scale independence on Shu-Osher")
    for spec in (ZM3, ZES3):
        for mode in ScaleMode:
            result = scale_independence_check(spec, mode, workers=ctx.workers)
            verdict.check(result.independent, f"{spec.label} {mode.value}: deviation {result.deviation:.3e}")
    for spec, mode in ((SchemeSpec(SchemeTag.F3), ScaleMode.VARIABLE),
                       (SchemeSpec(SchemeTag.PPLUS3), ScaleMode.LENGTH)):
        result = scale_independence_check(spec, mode, workers=ctx.workers)
        verdict.check(result.deviation >= SCALE_FAILURE_THRESHOLD,
                      f"{spec.label} {mode.value}: deviation {result.deviation:.3e} (expected dependence)")
    return verdict


def criterion_robustness(ctx: AcceptanceContext) -> Verdict:
    verdict = Verdict(10, "Robustness on the shock benchmarks")
    for obs in robustness_matrix(full_scale=ctx.full_scale, workers=ctx.workers):
        text = f"{obs.scheme} {obs.case}: " + (
            f"completed, min rho {obs.min_rho:.4g}, min p {obs.min_p:.4g}" if obs.completed
            else f"failed ({obs.failure.to_line()})"
        )
        if obs.asserted:
            verdict.check(obs.completed, text)
        else:
            verdict.note(text)
    return verdict


CRITERIA: Dict[int, Callable[[AcceptanceContext], Verdict]] = {
    1: criterion_optimal_order_cfl04,
    2: criterion_optimal_order_cfl025,
    3: criterion_z3_contrast,
    4: criterion_sensitivity,
    5: criterion_probes,
    6: criterion_nullspace,
    7: criterion_propositions,
    8: criterion_identities,
    9: criterion_scaling,
    10: criterion_robustness,
}


def run_acceptance(criteria: Optional[Sequence[int]] = None, full_scale: bool = False,
                   seed: int = DEFAULT_SEED, workers: int = 1) -> List[Verdict]:
    """
    Evaluate acceptance criteria.

    Args:
        criteria: Criterion numbers; default all ten
        full_scale: Run the robustness matrix on the full-scale grids
        seed: Seed for every randomized check
        workers: Worker threads for study cells

    Returns:
        One Verdict per criterion, in criterion order
    """
    if criteria is None:
        criteria = sorted(CRITERIA)
    unknown = sorted(set(criteria) - set(CRITERIA))
    if unknown:
        raise ValueError(f"unknown acceptance criteria {unknown} (valid: 1-10)")
    ctx = AcceptanceContext(seed, workers, full_scale)
    verdicts = []
    for number in sorted(set(criteria)):
        verdict = CRITERIA[number](ctx)
        logger.info("criterion %d (%s): %s", number, verdict.title, "PASS" if verdict.passed else "FAIL")
        verdicts.append(verdict)
    return verdicts


__all__ = ["Verdict", "AcceptanceContext", "CRITERIA", "identity_gaps", "run_acceptance"]
