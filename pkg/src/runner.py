"""
Orchestration of one CLI invocation.

The runner turns a validated configuration into study cells, runs them on a
worker pool and collects the results on the calling thread, which alone
writes artifacts. The exit status is 0 when every requested assertion holds,
1 when an assertion fails and 2 when a solver run fails unexpectedly.
"""
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.errors import ConfigError, NullspaceError, RobustnessFailure
from src.harness.acceptance import run_acceptance
from src.harness.convergence import ConvergenceReport, convergence_study
from src.harness.nullspace import forms_match, quadratic_form_nullspace, tau_cp1_form
from src.harness.probes import acp_order_probe
from src.harness.propositions import proposition_check
from src.harness.robustness import observe
from src.harness.scaling import scale_independence_check
from src.harness.timing import relative_timing
from src.solver.cases import CaseConfig, CaseTag, exact_solution, grid
from src.solver.euler import primitives
from src.solver.solver import error_norms, reference_solution, run_case, sample_reference
from src.utils.export import (
    ADVECTION_COLUMNS, EULER_1D_COLUMNS, EULER_2D_COLUMNS, ReportExporter, format_error,
    format_order,
)
from src.utils.history import StepHistory
from src.utils.settings import NormalizedConfig, RunManifest, load_manifest_config

logger = logging.getLogger(__name__)


class ExitStatus(IntEnum):
    OK = 0
    ASSERTION_FAILED = 1
    ROBUSTNESS_FAILURE = 2


@dataclass
class RunOutcome:
    """What a run produced: exit status, artifacts and the console summary."""
    status: ExitStatus = ExitStatus.OK
    artifacts: List[Path] = field(default_factory=list)
    summary: List[str] = field(default_factory=list)


def artifact_name(*parts: str) -> str:
    """File-system-safe name from scheme labels and case tags."""
    text = "_".join(part for part in parts if part)
    text = re.sub(r"[^A-Za-z0-9_.=-]+", "-", text)
    return text.strip("-")


class StudyRunner:
    """
    Runs one validated configuration.

    Study cells go through ``_map``, which keeps results in submission order so
    artifacts do not depend on the worker count.
    """

    def __init__(self, manifest: RunManifest, config: NormalizedConfig):
        """
        Initialize the runner.

        Args:
            manifest: Invocation settings (output, workers, plot scripts)
            config: Validated run configuration
        """
        self.manifest = manifest
        self.config = config
        self.exporter = ReportExporter(manifest.output, config.to_text(), config.seed,
                                       manifest.emit_gnuplot)
        self.outcome = RunOutcome()
        self.failures = []

    # Outcome bookkeeping

    def check(self, condition: bool, message: str) -> bool:
        self.outcome.summary.append(("PASS " if condition else "FAIL ") + message)
        if not condition:
            logger.warning("assertion failed: %s", message)
            self._raise_status(ExitStatus.ASSERTION_FAILED)
        return condition

    def note(self, message: str):
        self.outcome.summary.append(message)

    def _raise_status(self, status: ExitStatus):
        self.outcome.status = ExitStatus(max(self.outcome.status, status))

    def robustness_failure(self, record):
        """Record a solver failure; unexpected ones set exit status 2."""
        self.failures.append(record)
        if self.config.expect.get("fail"):
            self.note(f"expected failure: {record.to_line()}")
        else:
            self.note(f"FAIL robustness: {record.to_line()}")
            self._raise_status(ExitStatus.ROBUSTNESS_FAILURE)

    def _map(self, task: Callable, items: Sequence) -> list:
        workers = self.manifest.workers
        if workers > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                return list(pool.map(task, items))
        return [task(item) for item in items]

    # Entry point

    def run(self) -> RunOutcome:
        handler = getattr(self, f"run_{self.config.command}")
        handler()
        if self.failures:
            self.exporter.write_failures(f"{self.config.command}_failures.txt", self.failures)
        if self.config.expect.get("fail") and not self.failures and self.config.command in (
                "solve", "converge", "scale"):
            self.check(False, "expected a robustness failure, but every run completed")
        self.exporter.write_summary(f"{self.config.command}_summary.txt",
                                    self.outcome.summary + [f"exit status {int(self.outcome.status)}"])
        self.outcome.artifacts = list(self.exporter.written)
        return self.outcome

    # Commands

    def run_solve(self):
        cells = self.config.cases_for()
        inner = self.manifest.workers if len(cells) == 1 else 1

        def task(cell):
            name, cfg = cell
            history = StepHistory()
            try:
                return name, cfg, run_case(cfg, history, inner), history, None
            except RobustnessFailure as exc:
                return name, cfg, None, history, exc.record

        reference = None
        if self.config.study.get("reference"):
            case = self.config.case.case
            if case not in (CaseTag.BLAST, CaseTag.SHU_OSHER):
                raise ConfigError(f"no reference solution for {case.name}", field="study.reference")
            reference = reference_solution(case, self.manifest.workers)

        for name, cfg, state, history, failure in self._map(task, cells):
            if failure is not None:
                self.robustness_failure(failure)
                continue
            self._dump_field(name, cfg, state.interior)
            line = f"{cfg.label}: t = {state.t:.6g} after {state.step} steps"
            if history.min_rho is not None:
                line += f", min rho {history.min_rho:.6g}, min p {history.min_p:.6g}"
            self.note(line)
            if cfg.is_advection:
                l1, linf = error_norms(state.interior, exact_solution(cfg, state.t))
                self.note(f"{cfg.label}: L1 error {format_error(l1)}, Linf error {format_error(linf)}")
            if reference is not None:
                ref_x, ref_values = reference
                x = grid(cfg)
                ref = primitives(sample_reference(ref_x, ref_values, x), cfg.gamma)
                rho = primitives(state.interior, cfg.gamma).rho
                l1, linf = error_norms(rho, ref.rho)
                self.note(f"{cfg.label}: density vs reference L1 {format_error(l1)}, "
                          f"Linf {format_error(linf)}")

    def _dump_field(self, name: str, cfg: CaseConfig, interior: np.ndarray):
        base = artifact_name("solve", cfg.case.name, name)
        if cfg.is_advection:
            self.exporter.write_field_1d(base + ".csv", grid(cfg), ADVECTION_COLUMNS, interior)
            return
        s = primitives(interior, cfg.gamma)
        if cfg.is_two_d:
            x, y = grid(cfg)
            self.exporter.write_field_2d(base, x, y, EULER_2D_COLUMNS,
                                         np.stack([s.rho, s.u, s.v, s.p], axis=-1))
        else:
            self.exporter.write_field_1d(base + ".csv", grid(cfg), EULER_1D_COLUMNS,
                                         np.stack([s.rho, s.u, s.p], axis=-1))

    def run_converge(self):
        base = self.config.case
        n_list = self.config.study["n_list"]

        def task(cell):
            name, spec = cell
            return name, convergence_study(spec, base.case, base.cfl, n_list, base.shift, base.value)

        for name, report in self._map(task, list(self.config.schemes)):
            self.exporter.write_convergence(report, artifact_name("converge", report.case, name) + ".csv")
            for record in report.failures:
                self.robustness_failure(record)
            self._check_orders(name, report)

    def _check_orders(self, name: str, report: ConvergenceReport):
        expect = self.config.expect
        levels = expect.get("levels", 2)
        norms = ("l1", "linf") if expect.get("norm", "both") == "both" else (expect["norm"],)
        for norm in norms:
            orders = report.finest_orders(levels, norm)
            shown = [format_order(o) or "n/a" for o in orders]
            self.note(f"{name} {norm} orders at the {levels} finest levels: {shown}")
            if "min_order" in expect:
                self.check(all(o is not None and o >= expect["min_order"] for o in orders),
                           f"{name} {norm} orders >= {expect['min_order']}")
            if "max_order" in expect:
                self.check(all(o is not None and o <= expect["max_order"] for o in orders),
                           f"{name} {norm} orders <= {expect['max_order']}")

    def run_acp(self):
        study = self.config.study
        result = acp_order_probe(study["quantity"], study["lam"], study["cp_order"], self.config.seed)
        rows = [(i, format_order(slope)) for i, slope in enumerate(result.draw_slopes)]
        self.exporter.write_table(artifact_name("acp", result.quantity.name) + ".csv",
                                  ("draw", "slope"), rows)
        self.note(f"{result.quantity.name} lam={result.lam:g} CP{result.cp_order}: slope "
                  f"{format_order(result.slope)}, residual {result.residual:.3g}, "
                  f"{'conclusive' if result.conclusive else 'inconclusive'}")
        expect = self.config.expect
        if "slope" in expect:
            self.check(result.conclusive and abs(result.slope - expect["slope"]) <= expect["tolerance"],
                       f"slope within {expect['tolerance']} of {expect['slope']}")

    def run_props(self):
        study = self.config.study
        results = self._map(lambda prop_id: proposition_check(prop_id, study["samples"], self.config.seed),
                            list(study["propositions"]))
        rows = [(r.prop_id, r.samples, r.passed, r.ties, len(r.counterexamples)) for r in results]
        self.exporter.write_table("props.csv", ("proposition", "samples", "passed", "ties",
                                               "counterexamples"), rows)
        lines = [c.to_line() for r in results for c in r.counterexamples]
        self.exporter.write_summary("props_counterexamples.txt", lines)
        allowed = self.config.expect.get("counterexamples", 0)
        for r in results:
            self.check(len(r.counterexamples) <= allowed,
                       f"proposition {r.prop_id}: {len(r.counterexamples)} counterexamples "
                       f"({r.ties} ties) in {r.samples} samples")

    def run_nullspace(self):
        study = self.config.study
        extra = tuple((float(lam), int(order)) for lam, order in
                      (item.split(":") for item in study["extra"]))
        try:
            result = quadratic_form_nullspace(study["points"], study["order"], extra, self.config.seed)
        except NullspaceError as exc:
            self.check(False, str(exc))
            return
        rows = []
        for index, form in enumerate(result.basis):
            for a in range(form.shape[0]):
                rows.append((index, a, *(format_error(v) for v in form[a])))
        columns = ("basis", "row") + tuple(f"a{b}" for b in range(result.points))
        self.exporter.write_table(f"nullspace_{result.points}pt.csv", columns, rows)
        self.note(f"{result.points} points, {result.constraint_set}: dimension {result.dimension}, "
                  f"residual {result.residual:.2e}")
        if result.points == 4 and result.dimension == 1:
            self.note("basis matches tau_CP1: " + str(forms_match(result.basis[0], tau_cp1_form(), 1e-6)))
        if "dimension" in self.config.expect:
            self.check(result.dimension == self.config.expect["dimension"],
                       f"dimension {result.dimension} == {self.config.expect['dimension']}")

    def run_scale(self):
        study = self.config.study

        def task(cell):
            _, spec = cell
            return scale_independence_check(spec, study["mode"], study["ratio"], study["n"])

        results = self._map(task, list(self.config.schemes))
        rows = [(r.scheme, r.mode.value, repr(r.ratio), format_error(r.deviation)) for r in results]
        self.exporter.write_table(f"scale_{study['mode'].value}.csv",
                                  ("scheme", "mode", "ratio", "deviation"), rows)
        expect = self.config.expect
        for r in results:
            if r.failure is not None:
                self.robustness_failure(r.failure)
                continue
            self.note(f"{r.scheme} {r.mode.value}: deviation {r.deviation:.3e}")
            if "max_deviation" in expect:
                self.check(r.deviation <= expect["max_deviation"], f"{r.scheme} deviation <= {expect['max_deviation']}")
            if "min_deviation" in expect:
                self.check(r.deviation >= expect["min_deviation"], f"{r.scheme} deviation >= {expect['min_deviation']}")

    def run_bench(self):
        study = self.config.study
        rows = relative_timing([spec for _, spec in self.config.schemes], study["steps"], study["n"],
                               self.manifest.workers)
        self.exporter.write_table("bench.csv", ("scheme", "seconds", "relative"),
                                  [(r.scheme, f"{r.seconds:.6f}", f"{r.relative:.2f}") for r in rows])
        for r in rows:
            self.note(f"{r.scheme}: {r.relative:.2f}")

    def run_robust(self):
        cells = [(spec, case) for _, spec in self.config.schemes for case in self.config.study["cases"]]
        observations = self._map(lambda cell: observe(cell[0], cell[1], self.config.full_scale), cells)
        rows = []
        for obs in observations:
            rows.append((obs.scheme, obs.case, "completed" if obs.completed else "failed", obs.steps,
                         format_error(obs.min_rho), format_error(obs.min_p)))
            if obs.completed:
                continue
            if obs.asserted:
                self.robustness_failure(obs.failure)
            else:
                self.failures.append(obs.failure)
                self.note(f"observation: {obs.failure.to_line()}")
        self.exporter.write_table("robust.csv", ("scheme", "case", "status", "steps", "min_rho", "min_p"), rows)

    def run_accept(self):
        verdicts = run_acceptance(self.config.study["criteria"], self.config.full_scale,
                                  self.config.seed, self.manifest.workers)
        lines = []
        for verdict in verdicts:
            lines.append(f"criterion {verdict.criterion}: {'PASS' if verdict.passed else 'FAIL'} {verdict.title}")
            lines += ["  " + detail for detail in verdict.details]
            for report in verdict.reports:
                name = artifact_name("accept", str(verdict.criterion), report.scheme, f"cfl{report.cfl:g}",
                                     f"shift{report.shift:.6g}" if report.shift is not None else "")
                self.exporter.write_convergence(report, name + ".csv")
            self.check(verdict.passed, f"criterion {verdict.criterion} ({verdict.title})")
        self.exporter.write_summary("accept_verdicts.txt", lines)


def run(manifest: RunManifest, config: Optional[NormalizedConfig] = None) -> RunOutcome:
    """
    Execute a manifest.

    Args:
        manifest: Invocation settings
        config: Already validated configuration; read from the manifest when None

    Returns:
        RunOutcome with the exit status and the artifacts written

    Raises:
        ConfigError: on invalid configuration or an unwritable output directory
    """
    if not ReportExporter.validate_path(manifest.output):
        raise ConfigError(f"output directory {manifest.output} is not writable", field="output")
    if config is None:
        config = load_manifest_config(manifest)
    logger.info("running %s (seed %d, %d worker%s)", config.command, config.seed,
                manifest.workers, "" if manifest.workers == 1 else "s")
    return StudyRunner(manifest, config).run()


__all__ = ["ExitStatus", "RunOutcome", "StudyRunner", "artifact_name", "run"]
