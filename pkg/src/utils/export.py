"""Artifact export: CSV reports, field dumps, failure records and plot scripts."""
import csv
import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence

import numpy as np

from src.config import ERROR_FORMAT, LIBRARY_NAME, LIBRARY_VERSION, ORDER_FORMAT
from src.errors import FailureRecord
from src.harness.convergence import ConvergenceReport

logger = logging.getLogger(__name__)

CONVERGENCE_COLUMNS = ("N", "dt", "L1_error", "L1_order", "Linf_error", "Linf_order", "status")
EULER_1D_COLUMNS = ("rho", "u", "p")
EULER_2D_COLUMNS = ("rho", "u", "v", "p")
ADVECTION_COLUMNS = ("u",)


def format_error(value: Optional[float]) -> str:
    return "" if value is None else ERROR_FORMAT.format(value)


def format_order(value: Optional[float]) -> str:
    return "" if value is None else ORDER_FORMAT.format(value)


class ReportExporter:
    """
    Writes run artifacts into one output directory.

    Every text artifact starts with a ``#`` comment block carrying the library
    version, the seed and the normalized run configuration, so a file on its
    own is enough to reproduce it.
    """

    def __init__(self, output_dir, config_text: str = "", seed: Optional[int] = None,
                 emit_gnuplot: bool = False):
        """
        Initialize the exporter.

        Args:
            output_dir: Directory for all artifacts (created if missing)
            config_text: Normalized config embedded in every header
            seed: Seed recorded in every header
            emit_gnuplot: Also write a gnuplot script next to each CSV
        """
        self.output_dir = Path(output_dir)
        self.config_text = config_text
        self.seed = seed
        self.emit_gnuplot = emit_gnuplot
        self.written: List[Path] = []
        self.last_export_path: Optional[Path] = None

    @staticmethod
    def validate_path(file_path) -> bool:
        """
        Validate if the export path is usable.

        Args:
            file_path: File or directory path

        Returns:
            True if its directory exists or can be created
        """
        try:
            path = Path(file_path)
            target = path if path.suffix == "" else path.parent
            target.mkdir(parents=True, exist_ok=True)
            probe = target / ".write-test"
            probe.write_text("", encoding="utf-8")
            probe.unlink()
            return True
        except OSError:
            return False

    def header_lines(self) -> List[str]:
        lines = [f"# {LIBRARY_NAME} {LIBRARY_VERSION}"]
        if self.seed is not None:
            lines.append(f"# seed = {self.seed}")
        lines += [f"# {line}" if line else "#" for line in self.config_text.splitlines()]
        return lines

    def _path(self, name: str) -> Path:
        self.output_dir.mkdir(parents=True, exist_ok=True)
        return self.output_dir / name

    def _finish(self, path: Path) -> Path:
        self.written.append(path)
        self.last_export_path = path
        logger.info("wrote %s", path)
        return path

    def write_table(self, name: str, columns: Sequence[str], rows: Iterable[Sequence]) -> Path:
        """Write a CSV with the standard header block; cells are written as given."""
        path = self._path(name)
        with path.open("w", encoding="utf-8", newline="") as handle:
            for line in self.header_lines():
                handle.write(line + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            for row in rows:
                writer.writerow(row)
        return self._finish(path)

    def write_convergence(self, report: ConvergenceReport, name: str) -> Path:
        """CSV of one convergence study, mirroring the usual error/order table layout."""
        rows = []
        for row in report.rows:
            status = "ok" if not row.failed else "failed: " + row.failure.to_line()
            rows.append((row.n, ERROR_FORMAT.format(row.dt), format_error(row.l1_error),
                         format_order(row.l1_order), format_error(row.linf_error),
                         format_order(row.linf_order), status))
        path = self.write_table(name, CONVERGENCE_COLUMNS, rows)
        if self.emit_gnuplot:
            self.write_gnuplot(path, f"{report.scheme} on {report.case}, CFL {report.cfl:g}",
                               "N", "error", [(3, "L1"), (5, "Linf")], log_scale=True)
        return path

    def write_field_1d(self, name: str, x: np.ndarray, columns: Sequence[str],
                       values: np.ndarray) -> Path:
        """1-D field dump: one row per grid point, full precision."""
        values = np.asarray(values, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        rows = ([ERROR_FORMAT.format(xi)] + [ERROR_FORMAT.format(v) for v in row]
                for xi, row in zip(x, values))
        path = self.write_table(name, ("x",) + tuple(columns), rows)
        if self.emit_gnuplot:
            self.write_gnuplot(path, name, "x", columns[0],
                               [(i + 2, column) for i, column in enumerate(columns)])
        return path

    def write_field_2d(self, name: str, x: np.ndarray, y: np.ndarray, columns: Sequence[str],
                       values: np.ndarray) -> Path:
        """
        2-D field dump: raw little-endian float64 values in C order, shape
        (nx, ny, nvar), plus a CSV descriptor with the header and grid axes.
        """
        values = np.ascontiguousarray(values, dtype="<f8")
        binary = self._path(name + ".bin")
        values.tofile(binary)
        self._finish(binary)
        nx, ny, nvar = values.shape
        rows = [("shape", nx, ny, nvar), ("dtype", "<f8", "C", ""), ("variables", *columns)]
        rows += [("x", i, ERROR_FORMAT.format(v), "") for i, v in enumerate(x)]
        rows += [("y", j, ERROR_FORMAT.format(v), "") for j, v in enumerate(y)]
        return self.write_table(name + ".csv", ("field", "a", "b", "c"), rows)

    def write_failures(self, name: str, records: Sequence[FailureRecord]) -> Path:
        """One structured line per robustness failure."""
        path = self._path(name)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for line in self.header_lines():
                handle.write(line + "\n")
            for record in records:
                handle.write(record.to_line() + "\n")
        return self._finish(path)

    def write_summary(self, name: str, lines: Sequence[str]) -> Path:
        """Plain-text summary (verdicts, counterexamples) with the header block."""
        path = self._path(name)
        with path.open("w", encoding="utf-8", newline="\n") as handle:
            for line in self.header_lines():
                handle.write(line + "\n")
            for line in lines:
                handle.write(line + "\n")
        return self._finish(path)

    def write_gnuplot(self, csv_path: Path, title: str, xlabel: str, ylabel: str,
                      series: Sequence, log_scale: bool = False) -> Path:
        """
        Write a gnuplot script plotting columns of ``csv_path``.

        Args:
            series: (1-based column, label) pairs plotted against column 1
        """
        script = csv_path.with_suffix(".gp")
        plots = ", \\\n     ".join(
            f"'{csv_path.name}' using 1:{column} with linespoints title '{label}'"
            for column, label in series
        )
        lines = [
            "set datafile separator ','",
            "set datafile commentschars '#'",
            "set key autotitle columnhead",
            f"set title '{title}'",
            f"set xlabel '{xlabel}'",
            f"set ylabel '{ylabel}'",
        ]
        if log_scale:
            lines.append("set logscale xy")
        lines += ["set terminal pngcairo size 900,600",
                  f"set output '{csv_path.stem}.png'",
                  f"plot {plots}"]
        script.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return self._finish(script)

    def get_last_export_path(self) -> Optional[Path]:
        """Get the path of the last artifact written."""
        return self.last_export_path


__all__ = [
    "ReportExporter", "format_error", "format_order", "CONVERGENCE_COLUMNS",
    "ADVECTION_COLUMNS", "EULER_1D_COLUMNS", "EULER_2D_COLUMNS",
]
