"""Derived figures of merit: isolation bandwidth, contours, pump imbalance,
operating-regime classification."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import OmringError
from .model import DeviceParams, LinearizedModel, PumpDrive, steady_state_pump
from .solver import _require_stable, _scattering_at
from .sweep import SweepTable

__all__ = [
    "BandwidthResult",
    "RegimeClassification",
    "isolation_bandwidth",
    "bandwidth_contour",
    "pump_imbalance_curve",
    "classify_regime",
]


@dataclass(frozen=True)
class BandwidthResult:
    """Width of the contiguous detuning interval around zero where the
    isolation contrast stays at or above the threshold."""

    width: float
    interval: tuple[float, float]
    threshold: float
    diagnostic: str = ""


@dataclass(frozen=True)
class RegimeClassification:
    """Operating-regime labels; deterministic functions of the rates.

    * coupling_regime: ``strong`` iff |G_R| > kappa_t, else ``weak``.
    * port_regime (10% tolerance bands): ``add-drop`` if kappa' matches kappa
      and kappa_in is negligible; ``critically-coupled`` if kappa_in matches
      kappa with no second waveguide; ``over-coupled`` if kappa_in is
      negligible with no second waveguide; ``under-coupled`` otherwise.
    * sideband: ``resolved`` iff omega_m > 4*kappa_t.
    """

    coupling_regime: str
    port_regime: str
    sideband: str


def _full_contrast(model: LinearizedModel):
    """Contrast C(delta) = |t_R|^2 - |t_L|^2 from the waveguide-1 diagonals."""
    coupling = _require_stable(model)

    def contrast(delta: float) -> float:
        s = _scattering_at(coupling, model, float(delta) - model.delta)
        return abs(s.s_optical[0, 0]) ** 2 - abs(s.s_optical[1, 1]) ** 2

    return contrast


def _find_edge(contrast, threshold, inner, outer, tol):
    """Bisect the contrast crossing between a point above and a point below."""
    lo, hi = inner, outer
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if contrast(mid) >= threshold:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def isolation_bandwidth(model: LinearizedModel, threshold: float = 0.5, *,
                        contrast=None, edge_tol: float | None = None,
                        max_span: float | None = None) -> BandwidthResult:
    """Width of the isolation window around ``delta = 0``.

    Marches outward from zero on an adaptive detuning grid to bracket the
    first crossing of ``C(delta) = |t_R|^2 - |t_L|^2`` below ``threshold`` on
    each side, then bisects each edge.  ``contrast`` may substitute a custom
    ``C(delta)`` callable (e.g. the closed-form single-waveguide model) for
    the default full-solver contrast.

    Returns width 0 with a diagnostic when there is no isolation at the
    window center.
    """
    if contrast is None:
        contrast = _full_contrast(model)
    scale = model.kappa if model.kappa > 0 else model.kappa_t
    if edge_tol is None:
        edge_tol = 1e-4 * scale
    if max_span is None:
        max_span = 10.0 * max(model.kappa_t, 2.0 * abs(model.g_r), 4.0 * scale)

    if contrast(0.0) < threshold:
        return BandwidthResult(width=0.0, interval=(0.0, 0.0), threshold=threshold,
                               diagnostic="no isolation at window center")

    edges = []
    for sign in (+1.0, -1.0):
        step = 0.05 * scale
        inner = 0.0
        probe = sign * step
        while abs(probe) <= max_span:
            if contrast(probe) < threshold:
                break
            inner = probe
            probe += sign * step
            step *= 1.5
        else:
            raise OmringError(
                f"contrast stayed above threshold out to |delta| = {max_span:g}; "
                "no isolation edge found"
            )
        edges.append(_find_edge(contrast, threshold, inner, probe, edge_tol))
    hi, lo = edges
    return BandwidthResult(width=hi - lo, interval=(lo, hi), threshold=threshold)


def bandwidth_contour(params_base: LinearizedModel, beta_grid, g_r_grid,
                      threshold: float = 0.5, threads: int = 1) -> SweepTable:
    """Isolation bandwidth over a (beta, G_R) grid with G_L forced to zero.

    Rows are ``(beta, g_r, width, flag)``; cells where the bandwidth
    computation fails are flagged with NaN width and the sweep continues.
    """
    cells = [(float(b), float(g)) for b in beta_grid for g in g_r_grid]

    def one(cell):
        b, g = cell
        model = replace(params_base, beta=complex(b), g_r=complex(g), g_l=0j)
        try:
            res = isolation_bandwidth(model, threshold)
        except OmringError:
            return b, g, float("nan"), 1.0
        return b, g, res.width, 0.0

    if threads > 1 and len(cells) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, cells))
    else:
        rows = [one(c) for c in cells]
    return SweepTable(
        columns=("beta", "g_r", "width", "flag"),
        rows=rows,
        metadata={"bandwidth_threshold": repr(threshold), "g_l": "0"},
    )


def pump_imbalance_curve(params: DeviceParams, delta_grid) -> SweepTable:
    """Intra-resonator pump populations versus (shifted) pump detuning.

    Rows are ``(delta, n_r, n_l)`` with ``n_i = |alpha_i / E|^2`` for a unit
    right-going drive.
    """
    drive = PumpDrive(amplitude_right=1.0)
    rows = []
    for delta in delta_grid:
        pump = steady_state_pump(params.with_delta0(float(delta)), drive,
                                 detuning="shifted")
        rows.append((float(delta), abs(pump.alpha_r) ** 2, abs(pump.alpha_l) ** 2))
    return SweepTable(
        columns=("delta", "n_r", "n_l"),
        rows=rows,
        metadata={"drive": "right-going, unit amplitude"},
    )


def classify_regime(params: DeviceParams, model: LinearizedModel) -> RegimeClassification:
    """Label the coupling, port and sideband regimes (scale invariant)."""
    kappa_t = params.kappa_t
    coupling = "strong" if abs(model.g_r) > kappa_t else "weak"

    k, kp, kin = params.kappa, params.kappa_prime, params.kappa_in
    if k > 0 and abs(k - kp) / k <= 0.1 and kin <= 0.1 * k:
        port = "add-drop"
    elif kp == 0 and k > 0 and abs(k - kin) / k <= 0.1:
        port = "critically-coupled"
    elif kp == 0 and kin <= 0.1 * k:
        port = "over-coupled"
    else:
        port = "under-coupled"

    sideband = "resolved" if params.omega_m > 4.0 * kappa_t else "unresolved"
    return RegimeClassification(coupling_regime=coupling, port_regime=port,
                                sideband=sideband)
