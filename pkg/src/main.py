"""Command-line entry point for the weno3-zm studies."""
import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from src.config import DEFAULT_OUTPUT, LIBRARY_NAME, LIBRARY_VERSION
from src.errors import ConfigError
from src.runner import ExitStatus, run
from src.utils.settings import COMMANDS, RunManifest

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# flag destination -> (section, key) of the config it overrides
CASE_FLAGS = {
    "case": "tag", "n": "n", "ny": "ny", "cfl": "cfl", "dt": "dt", "end_time": "end_time",
    "integrator": "integrator", "shift": "shift", "value": "value", "average": "average",
}
STUDY_FLAGS = {
    "solve": ("reference",),
    "converge": ("n_list",),
    "acp": ("quantity", "lam", "cp_order"),
    "props": ("propositions", "samples"),
    "nullspace": ("points", "order", "extra"),
    "scale": ("mode", "ratio", "n"),
    "bench": ("steps", "n"),
    "robust": ("cases",),
    "accept": ("criteria",),
}


def parse_scheme_flag(text: str) -> Dict[str, str]:
    """
    ``TAG[:key=value,...]`` -> scheme section fields.

    >>> parse_scheme_flag("NN3:p=0.75")
    {'tag': 'NN3', 'p': '0.75'}
    """
    tag, _, params = text.partition(":")
    fields = {"tag": tag.strip()}
    for item in filter(None, (part.strip() for part in params.split(","))):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value in --scheme {text!r}", field="scheme")
        fields[key.strip()] = value.strip()
    return fields


def _common(parser: argparse.ArgumentParser):
    parser.add_argument("-c", "--config", type=Path, help="INI run configuration")
    parser.add_argument("-o", "--output", type=Path, default=Path(DEFAULT_OUTPUT),
                        help="artifact directory (default: %(default)s)")
    parser.add_argument("--seed", type=int, help="seed for every randomized study")
    parser.add_argument("-w", "--workers", type=int, default=1, help="worker threads")
    parser.add_argument("--full-scale", action="store_true", help="full-scale grids and end times")
    parser.add_argument("--emit-gnuplot", action="store_true", help="write .gp scripts next to CSVs")
    parser.add_argument("--expect", action="append", default=[], metavar="KEY=VALUE",
                        help="assertion for this run, e.g. min_order=2.9 (repeatable)")
    parser.add_argument("--expect-fail", action="store_true",
                        help="a robustness failure is the expected outcome")
    noise = parser.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    noise.add_argument("-q", "--quiet", action="store_true", help="warnings only")


def _schemes(parser: argparse.ArgumentParser):
    parser.add_argument("-s", "--scheme", action="append", default=[], metavar="TAG[:k=v,...]",
                        help="scheme to run, e.g. ZM3 or NN3:p=0.75 (repeatable)")


def _case(parser: argparse.ArgumentParser, with_grid: bool = True):
    parser.add_argument("--case", help="case tag, e.g. SINE_CP, SOD, RIEMANN2D")
    parser.add_argument("--cfl", type=float)
    parser.add_argument("--dt", type=float, help="fixed time step")
    parser.add_argument("--end-time", type=float)
    parser.add_argument("--integrator", help="TVDRK3 or RK4")
    parser.add_argument("--shift", type=float, help="critical-point shift of SINE_CP")
    parser.add_argument("--value", type=float, help="value of the CONSTANT case")
    parser.add_argument("--average", help="interface average: ARITHMETIC or ROE")
    if with_grid:
        parser.add_argument("-n", "--n", type=int, help="grid points (x)")
        parser.add_argument("--ny", type=int, help="grid points (y)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=LIBRARY_NAME,
        description="Third-order WENO-Z reconstructions, solvers and verification studies",
    )
    parser.add_argument("--version", action="version", version=f"{LIBRARY_NAME} {LIBRARY_VERSION}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    solve = sub.add_parser("solve", help="run one case and dump the final field")
    _schemes(solve)
    _case(solve)
    solve.add_argument("--reference", action="store_true",
                       help="compare density with the fine-grid JS5 reference (BLAST, SHU_OSHER)")

    converge = sub.add_parser("converge", help="grid convergence study on an advection case")
    _schemes(converge)
    _case(converge, with_grid=False)
    converge.add_argument("--n-list", nargs="+", type=int, help="dyadic grid list")

    acp = sub.add_parser("acp", help="decay rate of a quantity at a critical point")
    acp.add_argument("--quantity", help="e.g. TAU_CP1, TAU3, BETA2_0")
    acp.add_argument("--lam", type=float, help="critical-point offset in units of dx")
    acp.add_argument("--cp-order", type=int, choices=(0, 1, 2))

    props = sub.add_parser("props", help="randomized monotonicity checks")
    props.add_argument("--propositions", nargs="+", type=int, choices=(1, 2, 3, 4))
    props.add_argument("--samples", type=int)

    nullspace = sub.add_parser("nullspace", help="quadratic forms of maximal order")
    nullspace.add_argument("--points", type=int, choices=(3, 4))
    nullspace.add_argument("--order", type=int, help="order required at sampled offsets")
    nullspace.add_argument("--extra", nargs="+", metavar="LAM:ORDER", help="additional constraints")

    scale = sub.add_parser("scale", help="scale-independence check on Shu-Osher")
    _schemes(scale)
    scale.add_argument("--mode", help="VARIABLE or LENGTH")
    scale.add_argument("--ratio", type=float)
    scale.add_argument("-n", "--n", type=int)

    bench = sub.add_parser("bench", help="relative cost of the weight computations")
    _schemes(bench)
    bench.add_argument("--steps", type=int)
    bench.add_argument("-n", "--n", type=int)

    robust = sub.add_parser("robust", help="robustness matrix of schemes and hard cases")
    _schemes(robust)
    robust.add_argument("--cases", nargs="+")

    accept = sub.add_parser("accept", help="evaluate the acceptance criteria")
    accept.add_argument("--criteria", nargs="+", type=int, choices=range(1, 11), metavar="K")

    for command in COMMANDS:
        _common(sub.choices[command])
    return parser


def _text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return str(value)


def collect_overrides(args: argparse.Namespace) -> Dict[str, Dict[str, str]]:
    """Command-line values as config sections, ready for ``validate_config``."""
    overrides: Dict[str, Dict[str, str]] = {}
    for text in getattr(args, "scheme", []):
        overrides[f"scheme {text}"] = parse_scheme_flag(text)
    study_keys = STUDY_FLAGS[args.command]
    if args.command in ("solve", "converge"):
        case = {key: _text(getattr(args, dest)) for dest, key in CASE_FLAGS.items()
                if getattr(args, dest, None) is not None}
        if case:
            overrides["case"] = case
    study = {}
    for key in study_keys:
        value = getattr(args, key, None)
        if value is not None and value is not False:
            study[key] = _text(value)
    if study:
        overrides["study"] = study
    expect = {}
    for item in args.expect:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"expected KEY=VALUE, got {item!r}", field="expect")
        expect[key.strip()] = value.strip()
    if args.expect_fail:
        expect["fail"] = "true"
    if expect:
        overrides["expect"] = expect
    return overrides


def configure_logging(verbose: bool = False, quiet: bool = False):
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)


def print_summary(command: str, lines: List[str], artifacts: List[Path], status: ExitStatus):
    """Console table of the run; the only console output besides argparse's."""
    width = max([len(line) for line in lines] + [40])
    print("=" * width)
    print(f"{LIBRARY_NAME} {command}")
    print("-" * width)
    for line in lines:
        print(line)
    print("-" * width)
    print(f"{len(artifacts)} artifact(s) written")
    print(f"exit status {int(status)} ({status.name})")
    print("=" * width)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run the command and report.

    Returns:
        0 when every requested assertion holds, 1 on an assertion failure,
        2 on an unexpected robustness failure or invalid configuration
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)
    try:
        manifest = RunManifest(
            command=args.command,
            config_path=args.config,
            output=args.output,
            seed=args.seed,
            workers=args.workers,
            full_scale=args.full_scale,
            emit_gnuplot=args.emit_gnuplot,
            overrides=collect_overrides(args),
        )
        outcome = run(manifest)
    except ConfigError as exc:
        print(f"{LIBRARY_NAME}: error: {exc}", file=sys.stderr)
        return 2
    print_summary(args.command, outcome.summary, outcome.artifacts, outcome.status)
    return int(outcome.status)


if __name__ == "__main__":
    sys.exit(main())
