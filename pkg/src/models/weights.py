"""
Nonlinear weight engine.

Turns candidate smoothness indicators beta_k and a global indicator tau into
normalized weights omega_k for every supported scheme, including the piecewise
rational mapping used by WENO3-ZM.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import numpy as np

from src.config import (
    EPS_JS, EPS_Z_FAMILY, EPS_ZM3_RELATIVE, MAPPING_M, MAPPING_M1, MAPPING_N, MAPPING_TABLE,
    P_F3, P_NN3, P_NP3, P_PZ3, P_RANGES, P_Z3, PPLUS3_LAMBDA_POWER, TAU_CP2_SCALE,
)
from src.errors import WeightError
from src.models.indicators import TauTag
from src.models.stencil import CANDIDATES

logger = logging.getLogger(__name__)


class SchemeTag(Enum):
    """Schemes known to the weight engine."""
    JS3 = "JS3"
    Z3 = "Z3"
    NP3 = "NP3"
    F3 = "F3"
    NN3 = "NN3"
    PZ3 = "PZ3"
    PPLUS3 = "PPLUS3"
    ZM3 = "ZM3"
    ZES3 = "ZES3"
    JS5 = "JS5"

    @classmethod
    def parse(cls, text: str) -> "SchemeTag":
        """Look a tag up by name, case-insensitively."""
        key = text.strip().upper().replace("-", "").replace("+", "PLUS")
        try:
            return cls[key]
        except KeyError:
            valid = ", ".join(tag.name for tag in cls)
            raise ValueError(f"unknown scheme {text!r} (valid: {valid})") from None


# Schemes whose weights collapse to d_k whenever tau = 0
Z_FAMILY = frozenset({
    SchemeTag.Z3, SchemeTag.NP3, SchemeTag.F3, SchemeTag.NN3,
    SchemeTag.PZ3, SchemeTag.ZM3, SchemeTag.ZES3,
})

DEFAULT_TAU = {
    SchemeTag.Z3: TauTag.TAU3,
    SchemeTag.NP3: TauTag.TAU_N,
    SchemeTag.F3: TauTag.TAU_F3,
    SchemeTag.NN3: TauTag.TAU_N,
    SchemeTag.PZ3: TauTag.TAU3,
    SchemeTag.PPLUS3: TauTag.TAU_P,
    SchemeTag.ZM3: TauTag.TAU_CP1,
    SchemeTag.ZES3: TauTag.TAU_CP2,
}

DEFAULT_P = {
    SchemeTag.Z3: P_Z3,
    SchemeTag.NP3: P_NP3,
    SchemeTag.F3: P_F3,
    SchemeTag.NN3: P_NN3,
    SchemeTag.PZ3: P_PZ3,
}

STENCIL_WIDTH = {
    SchemeTag.JS3: 3,
    SchemeTag.Z3: 3,
    SchemeTag.NP3: 3,
    SchemeTag.F3: 3,
    SchemeTag.NN3: 3,
    SchemeTag.PZ3: 3,
    SchemeTag.PPLUS3: 3,
    SchemeTag.ZM3: 4,
    SchemeTag.ZES3: 5,
    SchemeTag.JS5: 5,
}

# Indicators that read only f_(j-1)..f_(j+1) and may replace a 3-point scheme's default
THREE_POINT_TAUS = frozenset({TauTag.TAU3, TauTag.TAU_N, TauTag.TAU_F3, TauTag.TAU_P})


@dataclass(frozen=True)
class MappingParams:
    """
    Parameters of the extended piecewise rational mapping.

    Attributes:
        n: Flatness order at zero
        m: Contact order at c3
        m1: Exponent of the middle term (m1 >= m + 1)
        c1, c2, c3: Shape coefficients; c3 is the fixed point where the identity branch starts
    """
    n: int = MAPPING_N
    m: int = MAPPING_M
    m1: int = MAPPING_M1
    c1: float = 1.2
    c2: float = 0.1
    c3: float = 55.0

    def __post_init__(self):
        if self.n < 1 or self.m < 0:
            raise ValueError(f"mapping needs n >= 1 and m >= 0, got n={self.n}, m={self.m}")
        if self.m1 < self.m + 1:
            raise ValueError(f"mapping needs m1 >= m + 1, got m1={self.m1}, m={self.m}")
        for name in ("c1", "c2", "c3"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"mapping coefficient {name} must be finite")
        if self.c1 <= 0 or self.c2 < 0 or self.c3 <= 0:
            raise ValueError(
                f"mapping needs c1 > 0, c2 >= 0, c3 > 0, got ({self.c1}, {self.c2}, {self.c3})"
            )

    @classmethod
    def for_linear_weight(cls, k: int) -> "MappingParams":
        """Default parameters tuned for linear weight d_k of the third-order scheme."""
        c1, c2, c3 = MAPPING_TABLE[k]
        return cls(MAPPING_N, MAPPING_M, MAPPING_M1, c1, c2, c3)


DEFAULT_MAPPING = (MappingParams.for_linear_weight(0), MappingParams.for_linear_weight(1))


def _p_admissible(tag: SchemeTag, p: float) -> bool:
    lo, hi = P_RANGES[tag.name]
    above = p > lo if lo == 0.0 else p >= lo
    return above and (hi is None or p <= hi)


@dataclass(frozen=True)
class SchemeSpec:
    """
    A fully resolved scheme configuration.

    Unset fields are filled with the scheme's defaults on construction, so two
    specs compare equal exactly when they compute the same weights.

    Attributes:
        tag: Scheme
        p: Exponent (Z3, NP3, F3, NN3, PZ3 only)
        c: Scale of tau_CP2 (ZES3 only)
        eps: Division guard added to every beta
        eps_rel: ZM3 guard relative to the window's largest squared sample
        mapping: One parameter set per linear weight (ZM3 only)
        tau: Global indicator; may replace a 3-point scheme's default
    """
    tag: SchemeTag
    p: Optional[float] = None
    c: Optional[float] = None
    eps: Optional[float] = None
    eps_rel: Optional[float] = None
    mapping: Optional[Tuple[MappingParams, MappingParams]] = None
    tau: Optional[TauTag] = None

    def __post_init__(self):
        tag = self.tag
        if tag in DEFAULT_P:
            p = DEFAULT_P[tag] if self.p is None else float(self.p)
            if not (np.isfinite(p) and _p_admissible(tag, p)):
                lo, hi = P_RANGES[tag.name]
                bound = f"[{lo}, {hi}]" if hi is not None else f">= {lo}"
                raise ValueError(f"p = {p} is outside the admissible range {bound} for {tag.name}")
            object.__setattr__(self, "p", p)
        elif self.p is not None:
            raise ValueError(f"{tag.name} takes no exponent p")

        if tag is SchemeTag.ZES3:
            c = TAU_CP2_SCALE if self.c is None else float(self.c)
            if not (np.isfinite(c) and c > 0):
                raise ValueError(f"tau scale c must be positive, got {c}")
            object.__setattr__(self, "c", c)
        elif self.c is not None:
            raise ValueError(f"{tag.name} takes no tau scale c")

        default_eps = EPS_JS if tag in (SchemeTag.JS3, SchemeTag.JS5) else EPS_Z_FAMILY
        eps = default_eps if self.eps is None else float(self.eps)
        if not (np.isfinite(eps) and eps >= 0):
            raise ValueError(f"eps must be finite and >= 0, got {eps}")
        object.__setattr__(self, "eps", eps)

        if tag is SchemeTag.ZM3:
            eps_rel = EPS_ZM3_RELATIVE if self.eps_rel is None else float(self.eps_rel)
            if not (np.isfinite(eps_rel) and eps_rel >= 0):
                raise ValueError(f"eps_rel must be finite and >= 0, got {eps_rel}")
            object.__setattr__(self, "eps_rel", eps_rel)
        elif self.eps_rel is not None:
            raise ValueError(f"{tag.name} takes no relative guard eps_rel")

        if tag is SchemeTag.ZM3:
            mapping = DEFAULT_MAPPING if self.mapping is None else tuple(self.mapping)
            if len(mapping) != 2:
                raise ValueError("ZM3 needs one mapping per linear weight (two)")
            object.__setattr__(self, "mapping", mapping)
        elif self.mapping is not None:
            raise ValueError(f"{tag.name} takes no mapping")

        if tag in DEFAULT_TAU:
            tau = DEFAULT_TAU[tag] if self.tau is None else self.tau
            if tau is not DEFAULT_TAU[tag] and (
                STENCIL_WIDTH[tag] != 3 or tau not in THREE_POINT_TAUS
            ):
                raise ValueError(f"{tag.name} cannot use global indicator {tau.name}")
            object.__setattr__(self, "tau", tau)
        elif self.tau is not None:
            raise ValueError(f"{tag.name} uses no global indicator")

    @property
    def label(self) -> str:
        """Short name used in reports, e.g. ``NN3(p=0.75)`` or ``NP3[TAU3]``."""
        text = self.tag.name
        if self.tag in DEFAULT_P and self.p != DEFAULT_P[self.tag]:
            text += f"(p={self.p:g})"
        if self.tag in DEFAULT_TAU and self.tau is not DEFAULT_TAU[self.tag]:
            text += f"[{self.tau.name}]"
        return text

    @property
    def order(self) -> int:
        """Candidate stencil size r: 3 for JS5, 2 otherwise."""
        return 3 if self.tag is SchemeTag.JS5 else 2

    @property
    def linear_weights(self) -> Tuple[float, ...]:
        return CANDIDATES.d[self.order]


def prm_map(w, params: MappingParams):
    """
    Extended piecewise rational mapping M.

    For w <= c3 returns w^(n+1) / (w^n + c2*w*(c3-w)^m1 + c1*(c3-w)^(m+1));
    above c3 it is the identity. M(0) = 0.

    Args:
        w: Non-negative ratio tau/beta (scalar or array)
        params: Mapping parameters

    Returns:
        Mapped value(s), same shape as ``w``
    """
    w = np.asarray(w, dtype=float)
    inside = np.minimum(w, params.c3)
    gap = params.c3 - inside
    denominator = (
        inside ** params.n
        + params.c2 * inside * gap ** params.m1
        + params.c1 * gap ** (params.m + 1)
    )
    # Denominator >= c1 * c3^(m+1) > 0 at w = 0 and >= w^n > 0 elsewhere
    with np.errstate(divide="ignore", invalid="ignore"):
        mapped = inside ** (params.n + 1) / denominator
    result = np.where(w > params.c3, w, np.where(w == 0.0, 0.0, mapped))
    return float(result) if result.ndim == 0 else result


def _check_finite(quantity: str, value: np.ndarray):
    bad = ~np.isfinite(value)
    if np.any(bad):
        index = tuple(int(i) for i in np.argwhere(bad)[0]) if value.ndim else ()
        raise WeightError(quantity, index, float(value[index] if index else value))


def nonlinear_weights(
    betas: Sequence, tau, dx: float, spec: SchemeSpec, scale=0.0
) -> np.ndarray:
    """
    Compute normalized nonlinear weights.

    Args:
        betas: One smoothness indicator per candidate (2, or 3 for JS5); scalars
               or arrays sharing a batch shape
        tau: Global indicator (ignored by JS3/JS5)
        dx: Grid spacing (used only by PPLUS3)
        spec: Scheme configuration
        scale: Largest squared sample of the window (used only by ZM3); it
               scales like beta, so the ZM3 guard eps_rel * scale keeps the
               weights unchanged when the data are rescaled

    Returns:
        Array of shape (len(betas), *batch) whose leading axis sums to one

    Raises:
        WeightError: if any beta or tau is not finite
    """
    d = spec.linear_weights
    if len(betas) != len(d):
        raise ValueError(f"{spec.tag.name} expects {len(d)} betas, got {len(betas)}")
    betas = [np.asarray(b, dtype=float) for b in betas]
    for k, beta in enumerate(betas):
        _check_finite(f"beta[{k}]", beta)
    eps = spec.eps
    tag = spec.tag

    if tag in (SchemeTag.JS3, SchemeTag.JS5):
        alphas = [dk / (eps + beta) ** 2 for dk, beta in zip(d, betas)]
    else:
        tau = np.asarray(tau, dtype=float)
        _check_finite("tau", tau)
        guarded = [beta + eps for beta in betas]
        if tag is SchemeTag.Z3:
            alphas = [dk * (1.0 + (tau / b) ** spec.p) for dk, b in zip(d, guarded)]
        elif tag in (SchemeTag.NP3, SchemeTag.F3):
            alphas = [dk * (1.0 + tau ** spec.p / b) for dk, b in zip(d, guarded)]
        elif tag in (SchemeTag.NN3, SchemeTag.PZ3):
            alphas = [dk * (1.0 + tau / b ** spec.p) for dk, b in zip(d, guarded)]
        elif tag is SchemeTag.PPLUS3:
            length_scale = dx ** PPLUS3_LAMBDA_POWER
            alphas = [
                dk * (1.0 + tau / b + length_scale * b / (tau + eps))
                for dk, b in zip(d, guarded)
            ]
        elif tag is SchemeTag.ZM3:
            scale = np.asarray(scale, dtype=float)
            _check_finite("scale", scale)
            # beta_0 vanishes at smooth critical points lying between nodes
            floor = spec.eps_rel * scale
            alphas = [
                dk * (1.0 + prm_map(tau / (b + floor), params))
                for dk, b, params in zip(d, guarded, spec.mapping)
            ]
        else:
            alphas = [dk * (1.0 + tau / b) for dk, b in zip(d, guarded)]

    alphas = np.stack(np.broadcast_arrays(*alphas))
    return alphas / np.sum(alphas, axis=0)


def scheme_stencil_width(spec: SchemeSpec) -> int:
    """Number of points consumed by one positive-wind reconstruction."""
    return STENCIL_WIDTH[spec.tag]


__all__ = [
    "SchemeTag", "Z_FAMILY", "DEFAULT_TAU", "DEFAULT_P", "STENCIL_WIDTH", "THREE_POINT_TAUS",
    "MappingParams", "DEFAULT_MAPPING", "SchemeSpec",
    "prm_map", "nonlinear_weights", "scheme_stencil_width",
]
