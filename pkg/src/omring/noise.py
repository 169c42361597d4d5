"""Thermally driven noise photon flux in the right-moving output.

Thermal phonons enter through the mechanical noise operator and are
up-converted into output photons.  Two spectral densities are provided:

* ``approx`` - the red-sideband closed form

      S(omega) = 2*gamma_m*N_th*kappa*G_R^2
                 / (G_R^4 - 2*G_R^2*x^2 + (kappa_t^2 + x^2)*x^2),   x = omega - omega_m

  whose denominator equals ``(G_R^2 - x^2)^2 + kappa_t^2*x^2 >= 0``.
* ``exact`` - assembled from the mechanical column of the full scattering
  solve with bath correlators ``<xi xi^dag> = (N_th+1) delta`` and
  ``<xi^dag xi> = N_th delta``.

Fluxes are integrals ``d omega / (2*pi)`` of the density over a band, reported
in photons per unit time of the model's rate units.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from scipy.integrate import IntegrationWarning, quad

from .errors import NumericalError
from .model import LinearizedModel
from .solver import _require_stable, _scattering_at

__all__ = ["NoiseReport", "noise_spectral_density", "noise_power"]

HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True)
class NoiseReport:
    """Integrated thermal-noise figures over a frequency band.

    ``power_estimate`` is the closed-form flux estimate
    ``gamma_m * N_th * kappa * band_width / G_R^2`` with ``band_width`` the
    full width of the band; ``n_noise_per_pulse`` is the approx flux divided by
    that width (noise photons accumulated over a pulse of inverse-bandwidth
    duration).  ``power_watts`` is filled only when a carrier frequency is
    supplied.
    """

    band: tuple[float, float]
    n_th: float
    flux_exact: float
    flux_approx: float
    power_estimate: float
    n_noise_per_pulse: float
    power_watts: float | None = None


def _approx_density(model: LinearizedModel, n_th: float, omega: float) -> float:
    x2 = (omega - model.omega_m) ** 2
    g2 = abs(model.g_r) ** 2
    den = (g2 - x2) ** 2 + model.kappa_t ** 2 * x2
    if den == 0:
        raise NumericalError(
            "noise density diverges: G_R = 0 with an undamped resonator probe "
            f"at omega={omega!r}"
        )
    return 2.0 * model.gamma_m * n_th * model.kappa * g2 / den


def noise_spectral_density(model: LinearizedModel, n_th: float, omega: float,
                           method: str = "approx") -> float:
    """Spectral density of noise photons in the right-moving output at ``omega``.

    ``method="approx"`` evaluates the closed form above (its gamma_m enters
    only through the product ``gamma_m * n_th``, so a vanishing mechanical
    linewidth at fixed heating rate is represented by scaling ``n_th``).
    ``method="exact"`` propagates the mechanical bath through the full solve.
    """
    if n_th < 0:
        raise ValueError("n_th must be >= 0")
    if method == "approx":
        return _approx_density(model, n_th, omega)
    if method == "exact":
        coupling = _require_stable(model)
        return _exact_density(coupling, model, n_th, omega)
    raise ValueError(f"method must be 'approx' or 'exact', got {method!r}")


def _exact_density(coupling, model: LinearizedModel, n_th: float, omega: float) -> float:
    s = _scattering_at(coupling, model, omega)
    a_xi = s.s_mech[0, 0]      # xi -> wg1-R output
    b_xi = s.s_mech[0, 1]      # xi^dag -> wg1-R output
    return n_th * abs(a_xi) ** 2 + (n_th + 1.0) * abs(b_xi) ** 2


def noise_power(model: LinearizedModel, n_th: float, band, *,
                omega_c: float | None = None, rate_scale: float = 1.0,
                epsrel: float = 1e-8) -> NoiseReport:
    """Integrate both noise densities over ``band = (omega_lo, omega_hi)``.

    The quadrature is adaptive (Gauss-Kronrod refinement) with panel splits
    seeded at the density extrema ``omega_m`` and ``omega_m +- |G_R|`` when
    they fall inside the band.  ``omega_c`` (rad/s) and ``rate_scale`` (rad/s
    per model rate unit) convert the estimate into watts.
    """
    lo, hi = (float(band[0]), float(band[1]))
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise ValueError(f"band must be a finite interval, got {band!r}")
    if n_th < 0:
        raise ValueError("n_th must be >= 0")
    width = hi - lo

    if width == 0.0:
        flux_exact = flux_approx = estimate = per_pulse = 0.0
    else:
        g_mag = abs(model.g_r)
        seeds = sorted({w for w in (model.omega_m, model.omega_m - g_mag,
                                    model.omega_m + g_mag) if lo < w < hi})
        coupling = _require_stable(model)

        def integrate(fn, label):
            with warnings.catch_warnings():
                warnings.simplefilter("error", IntegrationWarning)
                try:
                    value, abserr = quad(fn, lo, hi, points=seeds or None,
                                         epsrel=epsrel, limit=200)
                except IntegrationWarning as exc:
                    raise NumericalError(
                        f"{label} noise quadrature did not converge: {exc}",
                        achieved_tolerance=None,
                    ) from None
            return value / (2.0 * math.pi)

        flux_approx = integrate(lambda w: _approx_density(model, n_th, w), "approximate")
        flux_exact = integrate(lambda w: _exact_density(coupling, model, n_th, w), "exact")

        if g_mag == 0:
            estimate = math.inf if model.gamma_m * n_th > 0 else 0.0
        else:
            estimate = model.gamma_m * n_th * model.kappa * width / g_mag ** 2
        per_pulse = flux_approx / width

    watts = None
    if omega_c is not None:
        watts = HBAR * (omega_c * rate_scale) * (estimate * rate_scale)
    return NoiseReport(
        band=(lo, hi),
        n_th=float(n_th),
        flux_exact=flux_exact,
        flux_approx=flux_approx,
        power_estimate=estimate,
        n_noise_per_pulse=per_pulse,
        power_watts=watts,
    )
