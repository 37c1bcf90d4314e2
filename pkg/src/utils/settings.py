"""
Run configuration: the manifest built by the CLI and the INI-style config file.

A config file has the sections [run], [scheme] or [scheme NAME] (any number),
[case], [study] and [expect]. ``validate_config`` resolves every default, so
the normalized text written into artifacts fully describes the run.
"""
import configparser
import io
import logging
import re
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from src.config import (
    CONVERGENCE_N_LIST, DEFAULT_OUTPUT, DEFAULT_SEED, ENTROPY_FIX, GAMMA, MIN_GRID_POINTS,
    PROPOSITION_SAMPLES, SCALE_GRID, SCALE_R_DX, SCALE_R_VAR, TIMING_STEPS,
)
from src.errors import ConfigError
from src.harness.nullspace import DEFAULT_EXTRA
from src.harness.probes import QuantityTag
from src.harness.robustness import ROBUSTNESS_CASES, ROBUSTNESS_SCHEMES
from src.harness.scaling import ScaleMode
from src.models.indicators import TauTag
from src.models.weights import MappingParams, SchemeSpec, SchemeTag
from src.solver.cases import CaseConfig, CaseTag
from src.solver.euler import AverageMode
from src.solver.integrators import Integrator

logger = logging.getLogger(__name__)

COMMANDS = ("solve", "converge", "acp", "props", "nullspace", "scale", "bench", "robust", "accept")
CASE_COMMANDS = frozenset({"solve", "converge"})

RUN_KEYS = ("seed", "full_scale")
SCHEME_KEYS = ("tag", "p", "c", "eps", "eps_rel", "tau", "mapping_d0", "mapping_d1")
CASE_KEYS = (
    "tag", "n", "ny", "end_time", "cfl", "dt", "integrator", "shift", "value", "average",
    "entropy_fix", "gamma", "variable_scale", "length_scale",
)
STUDY_KEYS = {
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
EXPECT_KEYS = (
    "fail", "norm", "levels", "min_order", "max_order", "slope", "tolerance", "dimension",
    "max_deviation", "min_deviation", "counterexamples",
)

DEFAULT_SCHEMES = {
    "solve": (SchemeSpec(SchemeTag.ZM3),),
    "converge": (SchemeSpec(SchemeTag.ZM3),),
    "scale": (SchemeSpec(SchemeTag.ZM3),),
    "bench": tuple(SchemeSpec(tag) for tag in SchemeTag if tag is not SchemeTag.JS5),
    "robust": ROBUSTNESS_SCHEMES,
}


@dataclass(frozen=True)
class RunManifest:
    """
    Everything the CLI decided about one invocation.

    Attributes:
        command: Subcommand name
        config_path: Optional config file
        output: Directory receiving the artifacts
        seed: Overrides the config's seed when set
        workers: Worker threads for independent study cells
        full_scale: Use full-scale grids and end times
        emit_gnuplot: Write a plot script next to each CSV
        overrides: Config values from command-line flags, by section and key
    """
    command: str
    config_path: Optional[Path] = None
    output: Path = Path(DEFAULT_OUTPUT)
    seed: Optional[int] = None
    workers: int = 1
    full_scale: bool = False
    emit_gnuplot: bool = False
    overrides: Mapping[str, Mapping[str, str]] = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}", field="command", valid=COMMANDS)
        if self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}", field="workers")
        object.__setattr__(self, "output", Path(self.output))


@dataclass(frozen=True)
class NormalizedConfig:
    """A fully resolved run; ``to_text`` renders it back as config text."""
    command: str
    seed: int
    full_scale: bool
    schemes: Tuple[Tuple[str, SchemeSpec], ...]
    case: Optional[CaseConfig]
    study: Dict[str, Any]
    expect: Dict[str, Any]

    def cases_for(self) -> List[Tuple[str, CaseConfig]]:
        """One CaseConfig per configured scheme."""
        if self.case is None:
            return []
        return [(name, replace(self.case, scheme=spec)) for name, spec in self.schemes]

    def to_text(self) -> str:
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        parser["run"] = {"command": self.command, "seed": str(self.seed),
                         "full_scale": _render(self.full_scale)}
        for name, spec in self.schemes:
            parser[f"scheme {name}"] = _scheme_fields(spec)
        if self.case is not None:
            parser["case"] = _case_fields(self.case)
        if self.study:
            parser["study"] = {key: _render(value) for key, value in self.study.items()}
        if self.expect:
            parser["expect"] = {key: _render(value) for key, value in self.expect.items()}
        buffer = io.StringIO()
        parser.write(buffer)
        return buffer.getvalue().rstrip("\n") + "\n"


def _render(value: Any) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (list, tuple)):
        return ", ".join(_render(v) for v in value)
    if hasattr(value, "name"):
        return value.name
    return str(value)


def _mapping_text(params: MappingParams) -> str:
    return ", ".join(_render(v) for v in (params.n, params.m, params.m1,
                                          float(params.c1), float(params.c2), float(params.c3)))


def _scheme_fields(spec: SchemeSpec) -> Dict[str, str]:
    fields = {"tag": spec.tag.name}
    for key in ("p", "c", "eps", "eps_rel"):
        value = getattr(spec, key)
        if value is not None:
            fields[key] = _render(float(value))
    if spec.tau is not None:
        fields["tau"] = spec.tau.name
    if spec.mapping is not None:
        for k, params in enumerate(spec.mapping):
            fields[f"mapping_d{k}"] = _mapping_text(params)
    return fields


def _case_fields(cfg: CaseConfig) -> Dict[str, str]:
    fields = {"tag": cfg.case.name}
    for key in CASE_KEYS[1:]:
        fields[key] = _render(getattr(cfg, key))
    return fields


class _Reader:
    """Typed access to one section, with line numbers in every diagnostic."""

    def __init__(self, parser: configparser.ConfigParser, section: str, lines: Dict[Tuple[str, str], int],
                 allowed: Sequence[str]):
        self.section = section
        self.items = dict(parser[section]) if parser.has_section(section) else {}
        self.lines = lines
        for key in self.items:
            if key not in allowed:
                raise ConfigError(f"unknown key {key!r} in [{section}]", self.line(key),
                                  f"{section}.{key}", allowed)

    def line(self, key: str) -> Optional[int]:
        return self.lines.get((self.section, key))

    def error(self, key: str, message: str, valid: Sequence[str] = ()) -> ConfigError:
        return ConfigError(message, self.line(key), f"{self.section}.{key}", valid)

    def raw(self, key: str) -> Optional[str]:
        value = self.items.get(key)
        if value is None or value.strip().lower() in ("", "none"):
            return None
        return value.strip()

    def number(self, key: str, kind=float, default=None):
        text = self.raw(key)
        if text is None:
            return default
        try:
            return kind(text)
        except ValueError:
            raise self.error(key, f"expected {kind.__name__}, got {text!r}") from None

    def flag(self, key: str, default: bool = False) -> bool:
        text = self.raw(key)
        if text is None:
            return default
        lowered = text.lower()
        if lowered in ("true", "yes", "on", "1"):
            return True
        if lowered in ("false", "no", "off", "0"):
            return False
        raise self.error(key, f"expected true or false, got {text!r}")

    def numbers(self, key: str, kind=float, default=None):
        text = self.raw(key)
        if text is None:
            return default
        try:
            return tuple(kind(part) for part in text.replace(",", " ").split())
        except ValueError:
            raise self.error(key, f"expected a list of {kind.__name__}, got {text!r}") from None

    def tag(self, key: str, parse, default=None):
        text = self.raw(key)
        if text is None:
            return default
        try:
            return parse(text)
        except ValueError as exc:
            valid = re.search(r"\(valid: (.*)\)", str(exc))
            raise self.error(key, f"unknown value {text!r}",
                             valid.group(1).split(", ") if valid else ()) from None


def _line_index(text: str) -> Dict[Tuple[str, str], int]:
    """Line number of every key, by (section, key)."""
    lines, section = {}, None
    for number, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("[") and stripped.endswith("]"):
            section = stripped[1:-1].strip()
        elif section and stripped and stripped[0] not in "#;" and ("=" in stripped or ":" in stripped):
            key = re.split(r"[=:]", stripped, maxsplit=1)[0].strip()
            lines.setdefault((section, key), number)
    return lines


def _parse_enum(enum_cls):
    def parse(text: str):
        key = text.strip().upper()
        try:
            return enum_cls[key]
        except KeyError:
            valid = ", ".join(tag.name for tag in enum_cls)
            raise ValueError(f"unknown value (valid: {valid})") from None
    return parse


# Message fragment -> config key blamed for a validation error
SCHEME_ERROR_FIELDS = (("exponent p", "p"), ("p = ", "p"), ("scale c", "c"), ("eps_rel", "eps_rel"),
                       ("eps", "eps"), ("indicator", "tau"), ("mapping", "mapping_d0"))
CASE_ERROR_FIELDS = (("cfl", "cfl"), ("grids", "n"), ("ny", "ny"), ("end time", "end_time"),
                     ("scales", "variable_scale"))


def _blame(message: str, fields, default: str) -> str:
    return next((key for fragment, key in fields if fragment in message), default)


def _scheme(reader: _Reader, name: str) -> SchemeSpec:
    tag = reader.tag("tag", SchemeTag.parse)
    if tag is None:
        try:
            tag = SchemeTag.parse(name)
        except ValueError:
            raise ConfigError(f"[{reader.section}] needs a tag", field=f"{reader.section}.tag",
                              valid=[t.name for t in SchemeTag]) from None
    mapping = None
    if reader.raw("mapping_d0") or reader.raw("mapping_d1"):
        mapping = []
        for k in (0, 1):
            values = reader.numbers(f"mapping_d{k}")
            if values is None:
                mapping.append(MappingParams.for_linear_weight(k))
                continue
            if len(values) != 6:
                raise reader.error(f"mapping_d{k}", "expected n, m, m1, c1, c2, c3")
            n, m, m1, c1, c2, c3 = values
            try:
                mapping.append(MappingParams(int(n), int(m), int(m1), c1, c2, c3))
            except ValueError as exc:
                raise reader.error(f"mapping_d{k}", str(exc)) from None
        mapping = tuple(mapping)
    try:
        return SchemeSpec(
            tag,
            p=reader.number("p"),
            c=reader.number("c"),
            eps=reader.number("eps"),
            eps_rel=reader.number("eps_rel"),
            mapping=mapping,
            tau=reader.tag("tau", _parse_enum(TauTag)),
        )
    except ValueError as exc:
        raise reader.error(_blame(str(exc), SCHEME_ERROR_FIELDS, "tag"), str(exc)) from None


def _case(reader: _Reader, scheme: SchemeSpec, full_scale: bool, default: CaseTag) -> CaseConfig:
    kwargs = {
        "n": reader.number("n", int),
        "ny": reader.number("ny", int),
        "end_time": reader.number("end_time"),
        "cfl": reader.number("cfl"),
        "dt": reader.number("dt"),
        "integrator": reader.tag("integrator", _parse_enum(Integrator)),
        "shift": reader.number("shift"),
        "value": reader.number("value", default=1.0),
        "average": reader.tag("average", _parse_enum(AverageMode), AverageMode.ARITHMETIC),
        "entropy_fix": reader.number("entropy_fix", default=ENTROPY_FIX),
        "gamma": reader.number("gamma", default=GAMMA),
        "variable_scale": reader.number("variable_scale", default=1.0),
        "length_scale": reader.number("length_scale", default=1.0),
    }
    case = reader.tag("tag", CaseTag.parse, default)
    try:
        return CaseConfig(case, scheme, full_scale=full_scale, **kwargs)
    except ValueError as exc:
        raise reader.error(_blame(str(exc), CASE_ERROR_FIELDS, "tag"), str(exc)) from None


def _study(reader: _Reader, command: str, full_scale: bool) -> Dict[str, Any]:
    if command == "solve":
        return {"reference": reader.flag("reference")}
    if command == "converge":
        n_list = reader.numbers("n_list", int, CONVERGENCE_N_LIST)
        if min(n_list) < MIN_GRID_POINTS:
            raise reader.error("n_list", f"grids need at least {MIN_GRID_POINTS} points")
        ordered = sorted(n_list)
        if any(b != 2 * a for a, b in zip(ordered, ordered[1:])):
            raise reader.error("n_list", "grid list must be dyadic")
        return {"n_list": tuple(ordered)}
    if command == "acp":
        lam = reader.number("lam", default=0.0)
        if not -1.0 < lam < 2.0:
            raise reader.error("lam", f"lam must lie in (-1, 2), got {lam}")
        cp_order = reader.number("cp_order", int, 1)
        if cp_order not in (0, 1, 2):
            raise reader.error("cp_order", f"critical-point order must be 0, 1 or 2, got {cp_order}")
        return {"quantity": reader.tag("quantity", QuantityTag.parse, QuantityTag.TAU_CP1),
                "lam": lam, "cp_order": cp_order}
    if command == "props":
        ids = reader.numbers("propositions", int, (1, 2, 3, 4))
        if any(i not in (1, 2, 3, 4) for i in ids):
            raise reader.error("propositions", "proposition ids are 1-4")
        return {"propositions": ids, "samples": reader.number("samples", int, PROPOSITION_SAMPLES)}
    if command == "nullspace":
        points = reader.number("points", int, 4)
        if points not in (3, 4):
            raise reader.error("points", f"stencil points must be 3 or 4, got {points}")
        extra = reader.raw("extra")
        if extra is None:
            pairs = DEFAULT_EXTRA[points]
        else:
            try:
                pairs = tuple((float(lam), int(order)) for lam, order in
                              (item.split(":") for item in extra.replace(",", " ").split()))
            except ValueError:
                raise reader.error("extra", "expected lam:order pairs, e.g. -0.5:7") from None
        return {"points": points, "order": reader.number("order", int, 5),
                "extra": tuple(f"{lam:g}:{order}" for lam, order in pairs)}
    if command == "scale":
        mode = reader.tag("mode", ScaleMode.parse, ScaleMode.VARIABLE)
        ratio = reader.number("ratio", default=SCALE_R_VAR if mode is ScaleMode.VARIABLE else SCALE_R_DX)
        if ratio <= 0:
            raise reader.error("ratio", f"scale ratio must be positive, got {ratio}")
        return {"mode": mode, "ratio": ratio, "n": reader.number("n", int, SCALE_GRID)}
    if command == "bench":
        n = reader.number("n", int)
        return {"steps": reader.number("steps", int, TIMING_STEPS),
                "n": n if n is not None else CaseConfig(CaseTag.RIEMANN2D, SchemeSpec(SchemeTag.JS3),
                                                        full_scale=full_scale).n}
    if command == "robust":
        text = reader.raw("cases")
        if text is None:
            return {"cases": ROBUSTNESS_CASES}
        try:
            cases = tuple(CaseTag.parse(part) for part in text.replace(",", " ").split())
        except ValueError:
            raise reader.error("cases", f"unknown case in {text!r}", [tag.name for tag in CaseTag]) from None
        return {"cases": cases}
    criteria = reader.numbers("criteria", int, tuple(range(1, 11)))
    if any(c not in range(1, 11) for c in criteria):
        raise reader.error("criteria", "criteria are numbered 1-10")
    return {"criteria": criteria}


def _expect(reader: _Reader) -> Dict[str, Any]:
    if not reader.items:
        return {}
    expect: Dict[str, Any] = {"fail": reader.flag("fail")}
    norm = (reader.raw("norm") or "both").lower()
    if norm not in ("l1", "linf", "both"):
        raise reader.error("norm", f"unknown norm {norm!r}", ("l1", "linf", "both"))
    expect["norm"] = norm
    expect["levels"] = reader.number("levels", int, 2)
    for key in ("min_order", "max_order", "slope", "max_deviation", "min_deviation"):
        value = reader.number(key)
        if value is not None:
            expect[key] = value
    if "slope" in expect:
        expect["tolerance"] = reader.number("tolerance", default=0.3)
    for key in ("dimension", "counterexamples"):
        value = reader.number(key, int)
        if value is not None:
            expect[key] = value
    return expect


def validate_config(text: str, command: Optional[str] = None, seed: Optional[int] = None,
                    full_scale: Optional[bool] = None,
                    overrides: Optional[Mapping[str, Mapping[str, str]]] = None) -> NormalizedConfig:
    """
    Parse and validate config text, materializing every default.

    Args:
        text: Config text (may be empty)
        command: Subcommand; required unless [run] names one
        seed: Overrides [run] seed
        full_scale: Overrides [run] full_scale
        overrides: Values from command-line flags, applied after the text

    Returns:
        NormalizedConfig

    Raises:
        ConfigError: on syntax errors, duplicate sections or keys, unknown
            sections, keys or tags, and out-of-range values
    """
    parser = configparser.ConfigParser(strict=True, interpolation=None, default_section="__defaults__")
    parser.optionxform = str
    try:
        parser.read_string(text, source="config")
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ConfigError(str(exc).split(": ", 1)[-1], exc.lineno,
                          getattr(exc, "option", None) or exc.section) from None
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError("key outside of any section", exc.lineno) from None
    except configparser.ParsingError as exc:
        line = exc.errors[0][0] if exc.errors else None
        raise ConfigError("malformed line", line) from None
    lines = _line_index(text)

    if overrides:
        # schemes given on the command line replace those of the file
        if any(section.split()[0] == "scheme" for section in overrides):
            for existing in [s for s in parser.sections() if s.split()[0] == "scheme"]:
                parser.remove_section(existing)
        for section, values in overrides.items():
            if not parser.has_section(section):
                parser.add_section(section)
            for key, value in values.items():
                parser.set(section, key, str(value))

    scheme_sections = []
    for section in parser.sections():
        head = section.split()[0]
        if head == "scheme":
            scheme_sections.append(section)
        elif section not in ("run", "case", "study", "expect"):
            raise ConfigError(f"unknown section [{section}]", None, section,
                              ("run", "scheme", "scheme NAME", "case", "study", "expect"))

    run = _Reader(parser, "run", lines, ("command",) + RUN_KEYS)
    command = command or run.raw("command")
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}", run.line("command"), "run.command", COMMANDS)
    seed = seed if seed is not None else run.number("seed", int, DEFAULT_SEED)
    full_scale = full_scale if full_scale is not None else run.flag("full_scale")

    schemes: List[Tuple[str, SchemeSpec]] = []
    for section in scheme_sections:
        reader = _Reader(parser, section, lines, SCHEME_KEYS)
        name = section[len("scheme"):].strip()
        spec = _scheme(reader, name)
        schemes.append((name or spec.label, spec))
    names = [name for name, _ in schemes]
    if len(set(names)) != len(names):
        raise ConfigError("scheme names must be unique", field="scheme")
    if not schemes and command in DEFAULT_SCHEMES:
        schemes = [(spec.label, spec) for spec in DEFAULT_SCHEMES[command]]

    case = None
    case_reader = _Reader(parser, "case", lines, CASE_KEYS)
    if command in CASE_COMMANDS:
        default_case = CaseTag.SINE_CP
        case = _case(case_reader, schemes[0][1], full_scale, default_case)
        if command == "converge" and not case.is_advection:
            raise case_reader.error("tag", f"convergence studies need an advection case, got {case.case.name}",
                                    [tag.name for tag in (CaseTag.SINE_CP, CaseTag.CONSTANT, CaseTag.COMBO_WAVES)])
        if case.dt is not None and command == "converge":
            raise case_reader.error("dt", "convergence studies set the step through cfl")

    study = _study(_Reader(parser, "study", lines, STUDY_KEYS[command]), command, full_scale)
    expect = _expect(_Reader(parser, "expect", lines, EXPECT_KEYS))
    normalized = NormalizedConfig(command, seed, full_scale, tuple(schemes), case, study, expect)
    logger.debug("normalized config:\n%s", normalized.to_text())
    return normalized


def load_manifest_config(manifest: RunManifest) -> NormalizedConfig:
    """Read the manifest's config file (if any) and validate it with the manifest's overrides."""
    text = ""
    if manifest.config_path is not None:
        try:
            text = Path(manifest.config_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}", field="config") from None
    return validate_config(text, manifest.command, manifest.seed,
                           manifest.full_scale or None, manifest.overrides)


__all__ = [
    "COMMANDS", "RunManifest", "NormalizedConfig", "validate_config", "load_manifest_config",
]
