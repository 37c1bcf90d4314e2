"""
Unit tests for the weno3-zm components.
Run with: python tests.py
"""

import math
import sys
import tempfile
from pathlib import Path

sys.path.insert(0, '.')

import numpy as np
import pytest

from src.config import ORDER_BAND
from src.errors import ConfigError, NonPhysicalStateError, StencilError, WeightError
from src.models import (
    SchemeSpec, SchemeTag, StencilWindow, TauKind, TauTag, candidate_reconstruct, check_tau_forms,
    nonlinear_weights, prm_map, scheme_stencil_width, smoothness_beta, tau,
)
from src.models.indicators import tau_cp1_combination
from src.models.stencil import CANDIDATES, POSITIVE_OFFSET
from src.models.weights import DEFAULT_MAPPING
from src.utils import StepHistory, StepRecord


def test_stencil_window():
    """Test window construction and validation."""
    print("Testing Stencil Window...", end=" ")
    w = StencilWindow.centered([1.0, 2.0, 4.0])
    assert w.offset == 1
    assert w.point(-1) == 1.0 and w.point(1) == 4.0
    assert w.covers(-1, 1) and not w.covers(-2, 1)
    assert w.mirrored().point(-1) == 4.0

    with pytest.raises(StencilError):
        StencilWindow.centered([1.0, 2.0])
    with pytest.raises(StencilError):
        StencilWindow.centered([1.0, float("nan"), 2.0])
    with pytest.raises(StencilError):
        StencilWindow.centered([1.0, 2.0, 3.0], dx=0.0)
    with pytest.raises(StencilError):
        w.point(2)
    print("✓")


def test_candidates():
    """Test candidate reconstructions and smoothness indicators."""
    print("Testing Candidates...", end=" ")
    CANDIDATES.validate()

    # f_i = i: cell averages of h(x) = x, so h(x_(j+1/2)) = 1/2
    linear = StencilWindow.centered([-2.0, -1.0, 0.0, 1.0, 2.0])
    for r in (2, 3):
        for k in range(r):
            assert candidate_reconstruct(linear, r, k) == pytest.approx(0.5, abs=1e-15)

    constant = StencilWindow.centered(np.full(5, 3.0))
    for r in (2, 3):
        for k in range(r):
            assert smoothness_beta(constant, r, k) == 0.0

    assert smoothness_beta(linear, 2, 0) == pytest.approx(1.0)
    doubled = StencilWindow.centered(2.0 * linear.values)
    assert smoothness_beta(doubled, 2, 1) == pytest.approx(4.0 * smoothness_beta(linear, 2, 1))
    print("✓")


def test_global_indicators():
    """Test tau identities and the polynomials each tau annihilates."""
    print("Testing Global Indicators...", end=" ")
    rng = np.random.default_rng(7)

    window = StencilWindow(rng.uniform(-1.0, 1.0, (4, 1000)), 1)
    factored = tau(window, TauKind(TauTag.TAU_CP1))
    assert np.allclose(factored, tau_cp1_combination(window), rtol=1e-12, atol=1e-12)

    assert check_tau_forms(StencilWindow(rng.uniform(-1.0, 1.0, (3, 1000)), 1)) <= 1e-12

    quadratic = StencilWindow(np.array([1.0, 0.0, 1.0, 4.0]), 1)
    assert tau(quadratic, TauKind(TauTag.TAU3)) == 0.0
    assert tau(quadratic, TauKind(TauTag.TAU_CP1)) == 0.0
    assert tau(quadratic, TauKind(TauTag.TAU_N)) > 0.0

    cubic = StencilWindow.centered(np.array([-8.0, -1.0, 0.0, 1.0, 8.0]))
    assert tau(cubic, TauKind(TauTag.TAU_CP2)) == 0.0

    with pytest.raises(StencilError):
        tau(StencilWindow.centered([0.0, 1.0, 2.0]), TauKind(TauTag.TAU_CP1))
    print("✓")


def test_piecewise_rational_mapping():
    """Test the mapping's fixed points and flatness at zero."""
    print("Testing Rational Mapping...", end=" ")
    for params in DEFAULT_MAPPING:
        assert prm_map(0.0, params) == 0.0
        assert prm_map(params.c3, params) == pytest.approx(params.c3, rel=1e-14)
        assert prm_map(2.0 * params.c3, params) == 2.0 * params.c3
        assert prm_map(1e-3, params) < 1e-6
    values = prm_map(np.array([0.0, 1.0, 100.0]), DEFAULT_MAPPING[0])
    assert values.shape == (3,)
    print("✓")


def test_weights():
    """Test weight normalization and the tau = 0 limit."""
    print("Testing Nonlinear Weights...", end=" ")
    betas = (0.3, 0.7)
    for tag in (SchemeTag.Z3, SchemeTag.NP3, SchemeTag.F3, SchemeTag.NN3,
                SchemeTag.PZ3, SchemeTag.ZM3, SchemeTag.ZES3):
        omega = nonlinear_weights(betas, 0.0, 0.01, SchemeSpec(tag))
        assert np.allclose(omega, (1 / 3, 2 / 3), rtol=0, atol=1e-15)

    rng = np.random.default_rng(3)
    b = rng.uniform(0.0, 1.0, (2, 500))
    t = rng.uniform(0.0, 1.0, 500)
    for tag in SchemeTag:
        if tag is SchemeTag.JS5:
            continue
        omega = nonlinear_weights(list(b), t, 0.01, SchemeSpec(tag))
        assert np.all(omega >= 0.0)
        assert np.allclose(np.sum(omega, axis=0), 1.0, rtol=0, atol=1e-14)

    with pytest.raises(WeightError):
        nonlinear_weights([float("nan"), 1.0], 0.0, 0.01, SchemeSpec(SchemeTag.ZM3))
    with pytest.raises(WeightError):
        nonlinear_weights([1.0, 1.0], float("inf"), 0.01, SchemeSpec(SchemeTag.Z3))
    with pytest.raises(WeightError):
        nonlinear_weights([1.0, 1.0], 0.0, 0.01, SchemeSpec(SchemeTag.ZM3), float("nan"))
    print("✓")


def test_zm3_weight_scaling():
    """Test that ZM3 weights are unchanged when betas, tau and the window scale are rescaled."""
    print("Testing ZM3 Weight Scaling...", end=" ")
    spec = SchemeSpec(SchemeTag.ZM3)
    assert spec.eps_rel == 1e-6
    betas = np.array([[2e-20, 7e-20, 4e-21], [5e-20, 1e-21, 6e-20]])
    taus = np.array([3e-18, 2e-20, 5e-19])
    scale = 1e-14
    reference = nonlinear_weights(list(betas), taus, 0.01, spec, scale)
    assert abs(reference[0, 0] - 1 / 3) > 0.1
    for s2 in (1e-8, 1e-2, 1e4, 1e8):
        omega = nonlinear_weights(list(s2 * betas), s2 * taus, 0.01, spec, s2 * scale)
        assert np.allclose(omega, reference, rtol=0, atol=1e-10)

    # Round-off sized indicators on O(1) samples stay on the linear weights
    omega = nonlinear_weights([0.0, 3e-33], 1e-32, 0.01, spec, 1.0)
    assert np.allclose(omega, (1 / 3, 2 / 3), rtol=0, atol=1e-12)

    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.ZES3, eps_rel=1e-6)
    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.ZM3, eps_rel=-1.0)
    print("✓")


def test_zm3_between_nodes():
    """Test ZM3 near a critical point just off the midpoint of its left candidate."""
    print("Testing ZM3 Between Nodes...", end=" ")
    from src.solver.reconstruction import weights_for_window

    # f = 1 + x^2 + x^3 has f' = 0 at x = 0, here 0.495 h left of x_j
    h = 0.005
    x = (0.495 + np.arange(-1.0, 3.0)) * h
    window = StencilWindow(1.0 + x ** 2 + x ** 3, 1, h)
    omega = weights_for_window(window, SchemeSpec(SchemeTag.ZM3))
    assert np.allclose(omega, (1 / 3, 2 / 3), rtol=0, atol=1e-12)

    # Without the relative guard tau/beta_0 is about 23 and the weights leave d_k
    unguarded = weights_for_window(window, SchemeSpec(SchemeTag.ZM3, eps_rel=0.0))
    assert unguarded[0] - 1 / 3 > 0.1
    print("✓")


def test_scheme_spec():
    """Test scheme defaults and validation."""
    print("Testing Scheme Spec...", end=" ")
    assert SchemeSpec(SchemeTag.NN3).p == 0.5
    assert SchemeSpec(SchemeTag.ZM3).mapping == DEFAULT_MAPPING
    assert DEFAULT_MAPPING[0].c3 == 55.0 and DEFAULT_MAPPING[1].c3 == 35.0
    assert SchemeSpec(SchemeTag.ZES3).c == 1.0
    assert SchemeSpec(SchemeTag.ZM3).tau is TauTag.TAU_CP1

    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.PZ3, p=0.9)
    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.JS3, p=1.0)
    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.Z3, tau=TauTag.TAU_CP1)

    assert SchemeSpec(SchemeTag.Z3, p=2.0).p == 2.0
    with pytest.raises(ValueError):
        SchemeSpec(SchemeTag.Z3, p=2.5)
    assert SchemeSpec(SchemeTag.NP3, tau=TauTag.TAU3).label == "NP3[TAU3]"
    assert SchemeSpec(SchemeTag.NN3, p=0.75).label == "NN3(p=0.75)"
    assert SchemeSpec(SchemeTag.NN3, p=0.5) == SchemeSpec(SchemeTag.NN3)
    print("✓")


def test_reconstruction():
    """Test interface reconstruction on linear data, both winds."""
    print("Testing Reconstruction...", end=" ")
    from src.solver.reconstruction import Wind, interface_windows, reconstruct_interface

    for tag in SchemeTag:
        spec = SchemeSpec(tag)
        width = scheme_stencil_width(spec)
        positive = np.arange(width, dtype=float) - POSITIVE_OFFSET[width]
        assert reconstruct_interface(positive, spec) == pytest.approx(0.5, abs=1e-13)
        negative = np.arange(width, dtype=float) - (width - 1 - POSITIVE_OFFSET[width]) + 1
        assert reconstruct_interface(negative, spec, Wind.NEGATIVE) == pytest.approx(0.5, abs=1e-13)

    with pytest.raises(StencilError):
        reconstruct_interface(np.zeros(3), SchemeSpec(SchemeTag.ZM3))

    padded = np.arange(26, dtype=float)
    windows = interface_windows(padded, 4, Wind.POSITIVE)
    assert windows.shape == (4, 21)
    print("✓")


def _random_states(rng, size, two_d):
    from src.solver.euler import conserved
    rho = 10.0 ** rng.uniform(-2, 1, size)
    p = 10.0 ** rng.uniform(-2, 2, size)
    u = rng.uniform(-5, 5, size)
    v = rng.uniform(-5, 5, size) if two_d else np.zeros(size)
    return conserved(rho, u, v, p, two_d=two_d)


def test_euler_helpers():
    """Test flux splitting, eigenvectors and state decoding."""
    print("Testing Euler Helpers...", end=" ")
    from src.solver.euler import (
        conserved, eigenvectors, physical_flux, primitives, steger_warming_split,
    )
    rng = np.random.default_rng(11)
    for two_d in (False, True):
        U = _random_states(rng, 200, two_d)
        f_plus, f_minus = steger_warming_split(U)
        assert np.allclose(f_plus + f_minus, physical_flux(U), rtol=1e-12, atol=1e-12)
        L, R = eigenvectors(primitives(U), two_d=two_d)
        identity = np.broadcast_to(np.eye(U.shape[-1]), L.shape)
        assert np.allclose(L @ R, identity, atol=1e-10)

    # Supersonic to the right: every eigenvalue is positive
    U = conserved(1.0, 3.0, 0.0, 1.0)
    f_plus, f_minus = steger_warming_split(U)
    assert np.all(f_minus == 0.0)
    assert np.allclose(f_plus, physical_flux(U))

    bad = conserved(np.array([1.0, 1.0]), 0.0, 0.0, np.array([1.0, 1.0]))
    bad[1, 0] = -1.0
    with pytest.raises(NonPhysicalStateError) as info:
        primitives(bad)
    assert info.value.cell == (1,)
    print("✓")


def test_constant_solve():
    """Test that constant data is preserved exactly."""
    print("Testing Constant Solve...", end=" ")
    from src.solver.cases import CaseConfig, CaseTag
    from src.solver.solver import error_norms, run_case

    for tag in (SchemeTag.ZM3, SchemeTag.ZES3, SchemeTag.JS3):
        cfg = CaseConfig(CaseTag.CONSTANT, SchemeSpec(tag), n=20, end_time=0.2, value=2.5)
        history = StepHistory()
        state = run_case(cfg, history)
        assert state.t == pytest.approx(0.2)
        assert np.allclose(state.interior, 2.5, rtol=0, atol=1e-13)
        assert history.steps == state.step

    assert error_norms([1.0, 2.0], [1.5, 2.0]) == (0.25, 0.5)
    print("✓")


def test_conservation():
    """Test that periodic advection keeps the total of u * dx."""
    print("Testing Conservation...", end=" ")
    from src.solver.cases import CaseConfig, CaseTag, initial_condition
    from src.solver.solver import run_case

    for tag in (SchemeTag.ZM3, SchemeTag.ZES3):
        cfg = CaseConfig(CaseTag.SINE_CP, SchemeSpec(tag), n=80, end_time=0.5)
        before = np.sum(initial_condition(cfg)) * cfg.dx
        after = np.sum(run_case(cfg).interior) * cfg.dx
        assert abs(after - before) <= 1e-12, f"{tag.name} drift {after - before:.3e}"
    print("✓")


def test_riemann_symmetry():
    """Test that the 2-D Riemann problem stays symmetric about y = x."""
    print("Testing Riemann Symmetry...", end=" ")
    from src.solver.cases import CaseConfig, CaseTag
    from src.solver.euler import primitives
    from src.solver.solver import run_case

    cfg = CaseConfig(CaseTag.RIEMANN2D, SchemeSpec(SchemeTag.ZM3), n=40, ny=40, end_time=0.05)
    history = StepHistory()
    state = run_case(cfg, history)
    rho = primitives(state.interior, cfg.gamma).rho
    assert rho.shape == (40, 40)
    assert np.max(np.abs(rho - rho.T)) <= 1e-10
    assert history.min_rho > 0.0 and history.min_p > 0.0
    print("✓")


def test_strong_shock():
    """Test positivity and the shock position on the strong shock tube."""
    print("Testing Strong Shock...", end=" ")
    from scipy.optimize import brentq
    from src.config import STRONG_SHOCK_PR
    from src.solver.cases import CaseConfig, CaseTag, grid
    from src.solver.euler import primitives
    from src.solver.solver import run_case

    cfg = CaseConfig(CaseTag.STRONG_SHOCK, SchemeSpec(SchemeTag.ZM3))
    history = StepHistory()
    state = run_case(cfg, history)
    assert state.t == pytest.approx(cfg.end_time)
    assert history.min_rho > 0.0 and history.min_p > 0.0
    rho = primitives(state.interior, cfg.gamma).rho

    # Exact shock speed: left rarefaction and right shock share p* (rho = 1 on both sides)
    g = cfg.gamma
    p_left, p_right = 0.1 * STRONG_SHOCK_PR, 0.1
    c_left, c_right = math.sqrt(g * p_left), math.sqrt(g * p_right)

    def velocity_gap(p):
        rarefaction = 2 * c_left / (g - 1) * ((p / p_left) ** ((g - 1) / (2 * g)) - 1)
        shock = (p - p_right) * math.sqrt(2 / ((g + 1) * (p + (g - 1) / (g + 1) * p_right)))
        return rarefaction + shock

    p_star = brentq(velocity_gap, p_right, p_left)
    speed = c_right * math.sqrt((g + 1) / (2 * g) * p_star / p_right + (g - 1) / (2 * g))
    x = grid(cfg)
    front = x[np.nonzero(rho > 1.5)[0][-1]]
    assert abs(front - speed * cfg.end_time) <= 6 * cfg.dx, f"shock at {front}"
    print("✓")


def test_acceptance_runner():
    """Test criterion selection and a quick desk-scale acceptance run."""
    print("Testing Acceptance Runner...", end=" ")
    from src.harness.acceptance import CRITERIA, Verdict, run_acceptance
    from src.utils.settings import validate_config

    verdicts = run_acceptance([8, 6])
    assert [v.criterion for v in verdicts] == [6, 8]
    assert all(v.passed for v in verdicts), [v.details for v in verdicts]

    seen = []
    saved = dict(CRITERIA)
    try:
        for number in CRITERIA:
            CRITERIA[number] = lambda ctx, number=number: seen.append((number, ctx.full_scale)) or Verdict(number, "")
        run_acceptance()
        assert seen == [(n, False) for n in range(1, 11)]
        seen.clear()
        run_acceptance([10], full_scale=True)
        assert seen == [(10, True)]
    finally:
        CRITERIA.update(saved)
    with pytest.raises(ValueError):
        run_acceptance([11])

    assert validate_config("", "accept").study["criteria"] == tuple(range(1, 11))
    print("✓")


def test_case_config():
    """Test case defaults and grid checks."""
    print("Testing Case Config...", end=" ")
    from src.solver.cases import CaseConfig, CaseTag, grid

    cfg = CaseConfig(CaseTag.SINE_CP, SchemeSpec(SchemeTag.ZM3), n=40)
    x = grid(cfg)
    assert x[0] == -1.0 and cfg.dx == 0.05
    assert np.any(x == 0.0)
    with pytest.raises(ValueError):
        CaseConfig(CaseTag.SINE_CP, SchemeSpec(SchemeTag.ZM3), n=8)
    with pytest.raises(ValueError):
        CaseConfig(CaseTag.BLAST, SchemeSpec(SchemeTag.ZM3), cfl=0.4, dt=0.01)
    print("✓")


def test_convergence_zm3():
    """Test third order for ZM3 on the shifted critical-point wave."""
    print("Testing ZM3 Convergence...", end=" ")
    from src.harness import convergence_study

    report = convergence_study(SchemeSpec(SchemeTag.ZM3), n_list=(80, 160, 320, 640))
    assert not report.failures
    lo, hi = ORDER_BAND
    for norm in ("l1", "linf"):
        for order in report.finest_orders(2, norm):
            assert lo <= order <= hi, f"{norm} order {order}"
    assert report.row(640).linf_error <= 1.5 * 2.0047e-6
    assert report.row(640).linf_error >= 2.0047e-6 / 1.5

    # At CFL 0.25 the critical points keep returning near half nodes
    report = convergence_study(SchemeSpec(SchemeTag.ZM3), cfl=0.25, n_list=(160, 320, 640))
    assert not report.failures
    assert report.row(640).linf_order >= 2.9
    assert report.row(640).linf_error <= 1.5 * 2.0047e-6
    with pytest.raises(ValueError):
        convergence_study(SchemeSpec(SchemeTag.ZM3), n_list=(10, 30))
    print("✓")


def test_propositions():
    """Test the weight-ratio propositions on random samples."""
    print("Testing Propositions...", end=" ")
    from src.harness import proposition_check
    from src.harness.propositions import proposition_four_threshold

    u = proposition_four_threshold()
    assert abs(math.log(u) + 1.0 + u) < 1e-10

    for prop_id in (1, 2, 3, 4):
        result = proposition_check(prop_id, samples=2000, seed=5)
        assert result.ok, result.counterexamples[:3]
        assert result.passed + result.ties == 2000
    print("✓")


def test_nullspace():
    """Test the quadratic-form nullspace dimensions and the 4-point basis."""
    print("Testing Nullspace...", end=" ")
    from src.harness import forms_match, quadratic_form_nullspace, tau_cp1_form

    assert quadratic_form_nullspace(3).dimension == 0
    four = quadratic_form_nullspace(4)
    assert four.dimension == 1
    assert forms_match(four.basis[0], tau_cp1_form(), 1e-6)

    # v^T A v is proportional to tau_CP1
    rng = np.random.default_rng(2)
    values = rng.uniform(-1.0, 1.0, (4, 50))
    form = tau_cp1_form()
    quadratic = np.abs(np.einsum("in,ij,jn->n", values, form, values))
    ratio = quadratic / tau(StencilWindow(values, 1), TauKind(TauTag.TAU_CP1))
    assert np.allclose(ratio, ratio[0], rtol=1e-10)
    print("✓")


def test_acp_order():
    """Test decay rates of tau_CP1 and (delta^4)^2 at critical points."""
    print("Testing ACP Order...", end=" ")
    from src.harness import QuantityTag, acp_order_probe

    result = acp_order_probe(QuantityTag.TAU_CP1, 0.0, 1)
    assert result.conclusive
    assert abs(result.slope - 5.0) <= 0.3
    result = acp_order_probe(QuantityTag.D42_SQ, 0.0, 2)
    assert result.conclusive and result.rounded_order == 8
    with pytest.raises(ValueError):
        acp_order_probe(QuantityTag.TAU3, 2.5, 1)
    print("✓")


def test_scale_independence():
    """Test ZM3 on rescaled Shu-Osher data."""
    print("Testing Scale Independence...", end=" ")
    from src.harness import ScaleMode, scale_independence_check

    spec = SchemeSpec(SchemeTag.ZM3)
    variable = scale_independence_check(spec, ScaleMode.VARIABLE, n=100)
    assert variable.failure is None and variable.independent
    length = scale_independence_check(spec, ScaleMode.LENGTH, n=100)
    assert length.failure is None and length.independent
    print("✓")


def test_validate_config():
    """Test config validation and normalization."""
    print("Testing Config Validation...", end=" ")
    from src.utils.settings import validate_config

    config = validate_config("", "converge")
    name, spec = config.schemes[0]
    assert name == "ZM3" and spec.mapping == DEFAULT_MAPPING
    text = config.to_text()
    assert "mapping_d0 = 2, 1, 2, 1.2, 0.1, 55.0" in text
    assert validate_config(text).to_text() == text

    with pytest.raises(ConfigError) as info:
        validate_config("[case]\ncfl = 0.4\ncfl = 0.3\n", "solve")
    assert info.value.line == 3
    with pytest.raises(ConfigError) as info:
        validate_config("[case]\nn = 8\n", "solve")
    assert info.value.field == "case.n" and info.value.line == 2
    with pytest.raises(ConfigError) as info:
        validate_config("[scheme]\ntag = PZ3\np = 0.9\n", "solve")
    assert info.value.field == "scheme.p"
    with pytest.raises(ConfigError) as info:
        validate_config("[scheme]\ntag = ZM4\n", "solve")
    assert "ZM3" in info.value.valid
    with pytest.raises(ConfigError):
        validate_config("[study]\nn_list = 10 30 90\n", "converge")
    with pytest.raises(ConfigError):
        validate_config("[plot]\nx = 1\n", "solve")

    config = validate_config("", "solve", overrides={"scheme NN3": {"tag": "NN3"}})
    assert config.schemes[0][1].p == 0.5
    print("✓")


def test_step_history():
    """Test bounded step history and run-wide minima."""
    print("Testing Step History...", end=" ")
    history = StepHistory(max_size=3)
    for step, (rho, p) in enumerate([(1.0, 2.0), (0.5, 3.0), (0.8, 0.1), (0.9, 0.4)], start=1):
        history.record_step(StepRecord(step, 0.1 * step, 0.1, rho, p))
    assert len(history.as_rows()) == 3
    assert history.steps == 4
    assert history.minima() == (0.5, 0.1)
    assert history.last().step == 4

    history.clear()
    assert history.last() is None and history.steps == 0
    print("✓")


def test_exporter():
    """Test artifact headers and field dumps."""
    print("Testing Exporter...", end=" ")
    from src.utils.export import EULER_2D_COLUMNS, ReportExporter

    with tempfile.TemporaryDirectory() as tmp:
        exporter = ReportExporter(tmp, "[run]\nseed = 7\n", seed=7)
        path = exporter.write_table("t.csv", ("a", "b"), [(1, 2)])
        lines = path.read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# weno3-zm ")
        assert lines[1] == "# seed = 7"
        assert lines[-2:] == ["a,b", "1,2"]
        assert exporter.get_last_export_path() == path

        script = exporter.write_gnuplot(path, "t", "a", "b", [(2, "b")], log_scale=True)
        assert script.name == "t.gp"
        text = script.read_text(encoding="utf-8")
        assert "set logscale xy" in text
        assert "'t.csv' using 1:2" in text

        values = np.arange(24, dtype=float).reshape(3, 2, 4)
        exporter.write_field_2d("f", np.zeros(3), np.zeros(2), EULER_2D_COLUMNS, values)
        back = np.fromfile(Path(tmp) / "f.bin", dtype="<f8").reshape(3, 2, 4)
        assert np.array_equal(back, values)
        assert ReportExporter.validate_path(Path(tmp) / "sub")
    print("✓")


def test_runner():
    """Test end-to-end runs and exit statuses."""
    print("Testing Runner...", end=" ")
    from src.main import main, parse_scheme_flag
    from src.runner import ExitStatus, run
    from src.utils.settings import RunManifest

    assert parse_scheme_flag("NN3:p=0.75") == {"tag": "NN3", "p": "0.75"}

    with tempfile.TemporaryDirectory() as tmp:
        case = {"tag": "CONSTANT", "n": "20", "end_time": "0.2", "value": "2.5"}
        outcome = run(RunManifest("solve", output=tmp, overrides={"case": case}))
        assert outcome.status is ExitStatus.OK
        dump = Path(tmp) / "solve_CONSTANT_ZM3.csv"
        rows = [line for line in dump.read_text(encoding="utf-8").splitlines()
                if not line.startswith("#")][1:]
        assert len(rows) == 20
        assert all(abs(float(row.split(",")[1]) - 2.5) < 1e-13 for row in rows)

        outcome = run(RunManifest("nullspace", output=tmp,
                                  overrides={"study": {"points": "4"}, "expect": {"dimension": "1"}}))
        assert outcome.status is ExitStatus.OK
        assert (Path(tmp) / "nullspace_4pt.csv").exists()

        outcome = run(RunManifest("nullspace", output=tmp,
                                  overrides={"study": {"points": "3"}, "expect": {"dimension": "1"}}))
        assert outcome.status is ExitStatus.ASSERTION_FAILED

        assert main(["solve", "--case", "NOPE", "-o", tmp, "-q"]) == 2
    print("✓")


def test_relative_timing():
    """Test that timings are normalized to JS3."""
    print("Testing Relative Timing...", end=" ")
    from src.harness import relative_timing

    rows = relative_timing([SchemeSpec(SchemeTag.ZM3)], steps=2, n=20)
    assert [row.scheme for row in rows] == ["JS3", "ZM3"]
    assert rows[0].relative == 100.0
    assert rows[1].seconds > 0.0
    print("✓")


def run_all_tests():
    """Run all unit tests."""
    print("\n" + "="*50)
    print("weno3-zm - Unit Tests")
    print("="*50 + "\n")

    tests = [
        test_stencil_window,
        test_candidates,
        test_global_indicators,
        test_piecewise_rational_mapping,
        test_weights,
        test_zm3_weight_scaling,
        test_zm3_between_nodes,
        test_scheme_spec,
        test_reconstruction,
        test_euler_helpers,
        test_constant_solve,
        test_conservation,
        test_case_config,
        test_propositions,
        test_nullspace,
        test_acp_order,
        test_validate_config,
        test_step_history,
        test_exporter,
        test_runner,
        test_relative_timing,
        test_acceptance_runner,
        test_strong_shock,
        test_riemann_symmetry,
        test_convergence_zm3,
        test_scale_independence,
    ]

    passed = 0
    failed = 0

    for test in tests:
        try:
            test()
            passed += 1
        except AssertionError as e:
            print(f"✗ FAILED: {e}")
            failed += 1
        except Exception as e:
            print(f"✗ ERROR: {e}")
            failed += 1

    print("\n" + "="*50)
    print(f"Results: {passed} passed, {failed} failed")
    print("="*50 + "\n")

    return failed == 0


if __name__ == "__main__":
    success = run_all_tests()
    sys.exit(0 if success else 1)
