"""Interface reconstruction: windows in, f_hat at j+1/2 out."""
from enum import Enum
from typing import Optional, Union

import numpy as np

from src.config import GHOST_WIDTH
from src.errors import StencilError
from src.models.indicators import TauKind, tau
from src.models.stencil import POSITIVE_OFFSET, StencilWindow, candidate_reconstruct, smoothness_beta
from src.models.weights import SchemeSpec, SchemeTag, nonlinear_weights, scheme_stencil_width


class Wind(Enum):
    """Upwind direction of the split flux being reconstructed."""
    POSITIVE = 1
    NEGATIVE = -1


def _betas(w: StencilWindow, spec: SchemeSpec):
    if spec.tag is SchemeTag.JS5:
        return [smoothness_beta(w, 3, k) for k in range(3)]
    if spec.tag is SchemeTag.ZM3:
        return [smoothness_beta(w, 2, 0), smoothness_beta(w, 3, 2)]
    if spec.tag is SchemeTag.ZES3:
        return [smoothness_beta(w, 3, 0), smoothness_beta(w, 3, 2)]
    return [smoothness_beta(w, 2, 0), smoothness_beta(w, 2, 1)]


def weights_for_window(w: StencilWindow, spec: SchemeSpec) -> np.ndarray:
    """Nonlinear weights of ``spec`` on a positive-wind window."""
    betas = _betas(w, spec)
    if spec.tau is None:
        global_tau = 0.0
    else:
        kind = TauKind(spec.tau, spec.c) if spec.c is not None else TauKind(spec.tau)
        global_tau = tau(w, kind)
    if spec.tag is SchemeTag.ZM3:
        return nonlinear_weights(betas, global_tau, w.dx, spec, np.max(w.values ** 2, axis=0))
    return nonlinear_weights(betas, global_tau, w.dx, spec)


def _positive(w: StencilWindow, spec: SchemeSpec) -> np.ndarray:
    omega = weights_for_window(w, spec)
    r = spec.order
    result = omega[0] * candidate_reconstruct(w, r, 0)
    for k in range(1, r):
        result = result + omega[k] * candidate_reconstruct(w, r, k)
    return result


def reconstruct_interface(
    values: Union[StencilWindow, np.ndarray],
    spec: SchemeSpec,
    wind: Wind = Wind.POSITIVE,
    dx: float = 1.0,
) -> np.ndarray:
    """
    Reconstruct the flux at interface j+1/2 from one window.

    For the positive wind the window runs left to right with f_j at the usual
    offset (1 for widths 3 and 4, 2 for width 5). For the negative wind the
    window is given in natural left-to-right order with f_(j+1) as its upwind
    point; it is mirrored and then handled by the positive-wind formulas.

    Args:
        values: Window of shape (width, *batch), or a prepared StencilWindow
        spec: Scheme configuration
        wind: Direction of the split flux
        dx: Grid spacing, used when ``values`` is a raw array

    Returns:
        f_hat_(j+1/2) with the window's batch shape

    Raises:
        StencilError: if the window width does not match the scheme
    """
    width = scheme_stencil_width(spec)
    if isinstance(values, StencilWindow):
        window = values
    else:
        values = np.asarray(values, dtype=float)
        if values.ndim == 0 or values.shape[0] != width:
            raise StencilError(
                f"{spec.tag.name} needs a window of width {width}, got shape {values.shape}"
            )
        offset = POSITIVE_OFFSET[width]
        if wind is Wind.NEGATIVE:
            offset = width - 1 - offset
        window = StencilWindow(values, offset, dx)
    if window.length != width:
        raise StencilError(f"{spec.tag.name} needs a window of width {width}, got {window.length}")
    if wind is Wind.NEGATIVE:
        window = window.mirrored()
    return _positive(window, spec)


def interface_windows(padded: np.ndarray, width: int, wind: Wind, ghost: int = GHOST_WIDTH) -> np.ndarray:
    """
    Stack the windows of every interface of a ghost-padded array.

    The interfaces are those bounding interior cells: j+1/2 for
    j = ghost-1 .. n_padded-ghost-1, so a grid with N interior cells yields N+1 windows.

    Returns:
        Array of shape (width, N+1, *rest)
    """
    count = padded.shape[0] - 2 * ghost + 1
    offset = POSITIVE_OFFSET[width]
    j0 = ghost - 1
    start = j0 - offset if wind is Wind.POSITIVE else j0 + 2 + offset - width
    if start < 0 or start + width - 1 + count > padded.shape[0]:
        raise StencilError(f"ghost width {ghost} is too small for windows of width {width}")
    return np.stack([padded[start + i:start + i + count] for i in range(width)])


def reconstruct_grid(
    f_plus: np.ndarray,
    f_minus: Optional[np.ndarray],
    spec: SchemeSpec,
    dx: float,
) -> np.ndarray:
    """
    Reconstruct all interface fluxes of a padded grid componentwise.

    Args:
        f_plus: Positive split flux, padded along axis 0
        f_minus: Negative split flux (None when it vanishes identically)
        spec: Scheme configuration
        dx: Grid spacing

    Returns:
        f_hat at the N+1 interfaces, shape (N+1, *rest)
    """
    width = scheme_stencil_width(spec)
    windows = interface_windows(f_plus, width, Wind.POSITIVE)
    flux = reconstruct_interface(windows, spec, Wind.POSITIVE, dx)
    if f_minus is not None:
        windows = interface_windows(f_minus, width, Wind.NEGATIVE)
        flux = flux + reconstruct_interface(windows, spec, Wind.NEGATIVE, dx)
    return flux


__all__ = ["Wind", "weights_for_window", "reconstruct_interface", "interface_windows", "reconstruct_grid"]
