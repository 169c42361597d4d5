"""Closed-form scattering of the single-waveguide ring with a pumped mechanics.

In the rotating-wave regime (red-detuned pump, sideband resolved) a probe at
detuning ``delta`` from the optical resonance sees the transmission amplitudes

    t_L = (kappa_in - kappa - i*delta) / (kappa_in + kappa - i*delta)
    t_R = 1 - 2*(gamma_m/2 - i*delta)*kappa
              / (|G_R|^2 + (gamma_m/2 - i*delta)*(kappa + kappa_in - i*delta))

The left-moving probe sees a bare resonator; the right-moving probe sees the
pump-induced transparency window.  There is no backreflection in this idealized
model.  All functions broadcast over ``delta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedPhaseError

__all__ = [
    "ToyTransmission",
    "toy_transmission",
    "toy_phase_shift",
    "toy_isolation_contrast",
]


@dataclass(frozen=True)
class ToyTransmission:
    """Transmission amplitudes for right/left probes at detuning ``delta``."""

    t_r: complex | np.ndarray
    t_l: complex | np.ndarray
    delta: float | np.ndarray


def _check_rates(kappa, kappa_in, gamma_m):
    if kappa < 0 or kappa_in < 0 or gamma_m < 0:
        raise ValueError("rates must be >= 0")
    if kappa + kappa_in == 0:
        raise ValueError("kappa + kappa_in must be > 0")


def toy_transmission(kappa, kappa_in, gamma_m, g_r_mag, delta) -> ToyTransmission:
    """Transmission amplitudes of the single-waveguide device.

    Parameters
    ----------
    kappa, kappa_in, gamma_m:
        Waveguide coupling, intrinsic loss (field half-rates) and mechanical
        energy damping.
    g_r_mag:
        Magnitude of the enhanced coupling to the right-circulating mode.
    delta:
        Probe detuning from the optical resonance; scalar or array.

    At the exactly singular point ``g_r_mag = 0, gamma_m = 0, delta = 0`` the
    right amplitude is continued analytically: ``t_r := t_l``.
    """
    _check_rates(kappa, kappa_in, gamma_m)
    delta = np.asarray(delta, dtype=float)
    t_l = (kappa_in - kappa - 1j * delta) / (kappa_in + kappa - 1j * delta)

    mech = gamma_m / 2.0 - 1j * delta
    den = abs(g_r_mag) ** 2 + mech * (kappa + kappa_in - 1j * delta)
    singular = (den == 0)
    safe_den = np.where(singular, 1.0, den)
    t_r = np.where(singular, t_l, 1.0 - 2.0 * mech * kappa / safe_den)

    if delta.ndim == 0:
        return ToyTransmission(t_r=complex(t_r), t_l=complex(t_l), delta=float(delta))
    return ToyTransmission(t_r=t_r, t_l=t_l, delta=delta)


def _wrap_angle(angle):
    """Map angles to the principal interval (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)


def toy_phase_shift(kappa, kappa_in, gamma_m, g_r_mag, delta, unwrap: bool = False):
    """Transmission phases ``theta_r``, ``theta_l`` and their difference.

    Phases are principal values in (-pi, pi]; ``delta_theta`` is the principal
    value of ``theta_r - theta_l``.  With ``unwrap=True`` and an ordered
    ``delta`` grid, phases are unwrapped continuously along the grid instead.

    Raises
    ------
    UndefinedPhaseError
        If either amplitude vanishes at a queried detuning (for the left probe
        this happens at critical coupling, ``delta = 0``).
    """
    tt = toy_transmission(kappa, kappa_in, gamma_m, g_r_mag, delta)
    t_r = np.asarray(tt.t_r)
    t_l = np.asarray(tt.t_l)
    if np.any(np.abs(t_r) == 0) or np.any(np.abs(t_l) == 0):
        raise UndefinedPhaseError(
            "transmission amplitude vanishes at a queried detuning; its phase "
            "is undefined"
        )
    theta_r = np.angle(t_r)
    theta_l = np.angle(t_l)
    if unwrap and theta_r.ndim > 0:
        theta_r = np.unwrap(theta_r)
        theta_l = np.unwrap(theta_l)
        delta_theta = theta_r - theta_l
    else:
        delta_theta = _wrap_angle(theta_r - theta_l)
    if theta_r.ndim == 0:
        return float(theta_r), float(theta_l), float(delta_theta)
    return theta_r, theta_l, delta_theta


def toy_isolation_contrast(kappa, kappa_in, gamma_m, g_r_mag, delta):
    """Isolation contrast C(delta) = |t_R|^2 - |t_L|^2, in [-1, 1]."""
    tt = toy_transmission(kappa, kappa_in, gamma_m, g_r_mag, delta)
    contrast = np.abs(tt.t_r) ** 2 - np.abs(tt.t_l) ** 2
    if np.ndim(contrast) == 0:
        return float(contrast)
    return contrast
