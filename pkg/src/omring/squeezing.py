"""Phase-sensitive transmission of the single-waveguide device.

With the pump on the red sideband (``delta = -omega_m``), no backscattering and
only the right-circulating mode pumped, the right-moving output mixes the input
with its conjugate:

    f_out(omega) = alpha(omega) f_in(omega) + eta(omega) f_in^dag(-omega)

``alpha`` is the phase-insensitive amplitude, ``eta`` the phase-sensitive
(squeezing) amplitude; both are evaluated from their closed forms with the
mechanical damping set to zero.  ``omega`` here is the rotating-frame Fourier
frequency, so the probe detuning from the optical resonance is
``delta = omega - omega_m``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, UndefinedPhaseError

__all__ = [
    "PhaseSensitivePair",
    "appendix_coefficients",
    "squeezing_ratio",
    "squeezing_ratio_spectrum",
]


@dataclass(frozen=True)
class PhaseSensitivePair:
    """Closed-form pair (alpha(omega), eta(omega)) at one frequency."""

    alpha: complex
    eta: complex
    omega: float


def appendix_coefficients(kappa, kappa_in, g, omega_m, omega) -> PhaseSensitivePair:
    """Evaluate the closed forms for alpha(omega) and eta(omega).

    ``g`` may be complex; ``eta`` scales as ``g**2`` (phase included) while
    ``alpha`` depends on ``|g|^2`` only.  As ``g -> 0``, ``eta -> 0`` and
    ``alpha`` reduces to the bare-resonator transmission.
    """
    if kappa < 0 or kappa_in < 0:
        raise ValueError("rates must be >= 0")
    if omega_m <= 0:
        raise ValueError("omega_m must be > 0")
    g = complex(g)
    w = float(omega)
    g2 = abs(g) ** 2
    den = 4.0 * g2 * omega_m ** 2 + (w ** 2 - omega_m ** 2) * (
        (kappa + kappa_in - 1j * w) ** 2 + omega_m ** 2)
    if den == 0:
        raise NumericalError(
            f"phase-sensitive denominator vanishes at omega={w!r} "
            "(degenerate lossless parameters)"
        )
    num_alpha = 4.0 * g2 * omega_m * (omega_m + 1j * kappa) - (
        w ** 2 - omega_m ** 2) * ((w + 1j * kappa_in) ** 2 - (omega_m + 1j * kappa) ** 2)
    alpha = num_alpha / den
    eta = 4j * g * g * kappa * omega_m / den
    return PhaseSensitivePair(alpha=alpha, eta=eta, omega=w)


def squeezing_ratio(pair: PhaseSensitivePair) -> float:
    """|eta/alpha|: size of the phase-sensitive term relative to the ordinary one."""
    mag = abs(pair.alpha)
    if mag == 0:
        raise UndefinedPhaseError("alpha vanishes; squeezing ratio undefined")
    return abs(pair.eta) / mag


def squeezing_ratio_spectrum(kappa, kappa_in, g, omega_m, omegas) -> np.ndarray:
    """Vector convenience: |eta/alpha| on a frequency grid."""
    return np.array([
        squeezing_ratio(appendix_coefficients(kappa, kappa_in, g, omega_m, w))
        for w in np.asarray(omegas, dtype=float)
    ])
