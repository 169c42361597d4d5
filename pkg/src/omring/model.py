"""Device parameters, classical pump steady state and the linearized model.

The ring resonator supports two degenerate circulating modes (right and left)
coupled to one mechanical mode.  All rates are field half-rates in a consistent
angular-frequency unit system; the conventional choice is units of the
waveguide-1 coupling ``kappa`` (``kappa = 1``).  :meth:`DeviceParams.from_hz`
converts laboratory values quoted in Hz into that normalized system.

Sign conventions used throughout the package:

* intra-resonator drive enters the field equations as ``-2*kappa*E``,
* input noise/probe terms enter as ``-sqrt(2*kappa) * f_in``,
* output fields are ``f_out = f_in + sqrt(2*kappa) * a``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace

from .errors import ConvergenceError, DegenerateParameterError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class DeviceParams:
    """Physical rates and frequencies of the ring + waveguide(s) + mechanics.

    Parameters
    ----------
    omega_m:
        Mechanical angular frequency (> 0).
    kappa:
        Field coupling half-rate into waveguide 1 (resonator energy decay into
        that waveguide is ``2*kappa``).
    kappa_prime:
        Field coupling half-rate into waveguide 2 (0 for a single waveguide).
    kappa_in:
        Intrinsic field loss half-rate.
    gamma_m:
        Mechanical energy damping rate.  The mechanical field amplitude is
        damped at ``gamma_m / 2``; validity of the damping model requires
        ``gamma_m << omega_m`` (a warning is emitted above ``omega_m / 10``).
    g0:
        Single-photon optomechanical coupling (optical shift per quantum of
        motion).
    beta:
        Complex backscattering amplitude between the two circulating modes.
    delta0:
        Pump detuning from the optical resonance.  Interpreted as the bare
        detuning or as the already-shifted detuning depending on the mode
        passed to :func:`steady_state_pump`.
    omega_c:
        Optical carrier angular frequency in the same rate units as the other
        fields.  Optional; only needed to convert photon fluxes into watts
        (together with ``rate_scale``).
    rate_scale:
        Physical size of one internal rate unit, in rad/s.  Set by
        :meth:`from_hz`; 1.0 means "rates are already in the unit you want".
    """

    omega_m: float
    kappa: float = 1.0
    kappa_prime: float = 0.0
    kappa_in: float = 0.0
    gamma_m: float = 0.0
    g0: float = 0.0
    beta: complex = 0j
    delta0: float = 0.0
    omega_c: float | None = None
    rate_scale: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "kappa_prime", "kappa_in", "gamma_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be > 0, got {self.omega_m!r}")
        if not self.kappa_t > 0:
            raise ValueError("total decay rate kappa + kappa_prime + kappa_in must be > 0")
        if self.rate_scale <= 0:
            raise ValueError("rate_scale must be > 0")
        if not all(map(math.isfinite, (self.omega_m, self.kappa, self.kappa_prime,
                                       self.kappa_in, self.gamma_m, self.g0, self.delta0))):
            raise ValueError("device rates must be finite")
        if not cmath.isfinite(complex(self.beta)):
            raise ValueError("beta must be finite")
        if self.gamma_m > self.omega_m / 10.0:
            warnings.warn(
                "gamma_m exceeds omega_m/10; the Langevin damping model assumes "
                "gamma_m << omega_m",
                stacklevel=2,
            )

    @property
    def kappa_t(self) -> float:
        """Total ring-resonator field decay rate kappa + kappa' + kappa_in."""
        return self.kappa + self.kappa_prime + self.kappa_in

    @classmethod
    def from_hz(cls, *, omega_m, kappa, kappa_prime=0.0, kappa_in=0.0, gamma_m=0.0,
                g0=0.0, beta=0j, delta0=0.0, omega_c=None) -> "DeviceParams":
        """Build normalized parameters from plain-Hz rates.

        Every argument is a frequency in Hz (not rad/s).  All rates are
        multiplied by 2*pi and divided by the resulting kappa so the stored
        parameters are in units of kappa; ``rate_scale`` records the physical
        value of that unit in rad/s.
        """
        if kappa <= 0:
            raise ValueError("kappa in Hz must be > 0 to normalize")
        scale = TWO_PI * kappa
        return cls(
            omega_m=TWO_PI * omega_m / scale,
            kappa=1.0,
            kappa_prime=TWO_PI * kappa_prime / scale,
            kappa_in=TWO_PI * kappa_in / scale,
            gamma_m=TWO_PI * gamma_m / scale,
            g0=TWO_PI * g0 / scale,
            beta=TWO_PI * complex(beta) / scale,
            delta0=TWO_PI * delta0 / scale,
            omega_c=None if omega_c is None else TWO_PI * omega_c / scale,
            rate_scale=scale,
        )

    def with_delta0(self, delta0: float) -> "DeviceParams":
        return replace(self, delta0=delta0)


@dataclass(frozen=True)
class PumpDrive:
    """Classical pump amplitudes driving the two circulating modes."""

    amplitude_right: complex
    amplitude_left: complex = 0j

    def __post_init__(self):
        if not (cmath.isfinite(complex(self.amplitude_right))
                and cmath.isfinite(complex(self.amplitude_left))):
            raise ValueError("drive amplitudes must be finite")


@dataclass(frozen=True)
class PumpSteadyState:
    """Classical steady state of the pumped ring.

    ``b_static`` and ``delta`` satisfy, with ``n = |alpha_r|^2 + |alpha_l|^2``:

    * ``b_static = -g0 * n / omega_m``
    * ``delta = delta0 + 2 * g0**2 * n / omega_m``  (bare-detuning mode)
    """

    alpha_r: complex
    alpha_l: complex
    b_static: float
    delta: float


@dataclass(frozen=True)
class LinearizedModel:
    """Linearized fluctuation model around the pump steady state.

    ``g_r`` and ``g_l`` are the pump-enhanced couplings ``g0 * alpha_r`` and
    ``g0 * alpha_l``; ``delta`` is the shifted pump detuning.  This is the sole
    input of every scattering, noise and bandwidth computation.
    """

    g_r: complex
    g_l: complex
    delta: float
    beta: complex
    omega_m: float
    kappa: float
    kappa_prime: float
    kappa_in: float
    gamma_m: float

    @property
    def kappa_t(self) -> float:
        return self.kappa + self.kappa_prime + self.kappa_in

    def __post_init__(self):
        for name in ("kappa", "kappa_prime", "kappa_in", "gamma_m"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)!r}")
        if not self.omega_m > 0:
            raise ValueError(f"omega_m must be > 0, got {self.omega_m!r}")


def _pump_amplitudes(params: DeviceParams, drive: PumpDrive, delta: float):
    """Solve the 2x2 steady-state system for (alpha_r, alpha_l) at fixed delta.

    Single-sided drive reduces to

        alpha_r = 2*kappa*(i*delta - kappa_t) * E / ((i*delta - kappa_t)^2 + |beta|^2)
        alpha_l = i*beta * alpha_r / (i*delta - kappa_t)
    """
    d = 1j * delta - params.kappa_t
    beta = complex(params.beta)
    det = d * d + abs(beta) ** 2
    if det == 0:
        raise DegenerateParameterError(
            "pump steady state is singular: |beta|^2 == -(i*delta - kappa_t)^2 "
            f"(delta={delta!r}, kappa_t={params.kappa_t!r}, beta={beta!r})"
        )
    e_r = complex(drive.amplitude_right)
    e_l = complex(drive.amplitude_left)
    two_k = 2.0 * params.kappa
    #   d * a_r - i*conj(beta) * a_l = 2k E
    #  -i*beta * a_r + d * a_l      = 2k E'
    alpha_r = two_k * (d * e_r + 1j * beta.conjugate() * e_l) / det
    alpha_l = two_k * (d * e_l + 1j * beta * e_r) / det
    return alpha_r, alpha_l


def steady_state_pump(params: DeviceParams, drive: PumpDrive, *,
                      detuning: str = "shifted", tol: float = 1e-12,
                      max_iter: int = 200) -> PumpSteadyState:
    """Classical intra-resonator pump amplitudes and static mechanical shift.

    Parameters
    ----------
    detuning:
        ``"shifted"``: ``params.delta0`` is taken as the detuning with the
        static optomechanical shift already absorbed (the parameterization
        used by every spectrum in this package).  ``"bare"``: ``params.delta0``
        is the bare pump-laser detuning and the shifted value is found by
        fixed-point iteration of
        ``delta <- delta0 + 2*g0^2*(|a_R|^2+|a_L|^2)/omega_m``.
    tol:
        Relative tolerance of the fixed-point iteration.
    max_iter:
        Iteration cap; exceeding it raises :class:`ConvergenceError`.
    """
    if detuning not in ("shifted", "bare"):
        raise ValueError(f"detuning mode must be 'shifted' or 'bare', got {detuning!r}")

    if detuning == "shifted" or params.g0 == 0:
        delta = params.delta0
        alpha_r, alpha_l = _pump_amplitudes(params, drive, delta)
    else:
        shift_coef = 2.0 * params.g0 ** 2 / params.omega_m
        delta = params.delta0
        for _ in range(max_iter):
            alpha_r, alpha_l = _pump_amplitudes(params, drive, delta)
            new = params.delta0 + shift_coef * (abs(alpha_r) ** 2 + abs(alpha_l) ** 2)
            if abs(new - delta) <= tol * max(1.0, abs(new)):
                delta = new
                break
            delta = new
        else:
            raise ConvergenceError(
                "self-consistent detuning did not converge within "
                f"{max_iter} iterations (possible multistable or invalid pump regime)"
            )
        alpha_r, alpha_l = _pump_amplitudes(params, drive, delta)

    n_pump = abs(alpha_r) ** 2 + abs(alpha_l) ** 2
    b_static = -params.g0 * n_pump / params.omega_m
    return PumpSteadyState(alpha_r=alpha_r, alpha_l=alpha_l,
                           b_static=b_static, delta=delta)


def cancellation_drive(params: DeviceParams, drive_right: complex) -> complex:
    """Reverse-pump amplitude that empties the left-circulating mode.

    Returns ``E' = -i*beta*E / (i*delta - kappa_t)``; feeding ``(E, E')`` back
    into :func:`steady_state_pump` (shifted mode) gives ``alpha_l = 0`` and
    ``alpha_r = 2*kappa*E / (i*delta - kappa_t)``.
    """
    d = 1j * params.delta0 - params.kappa_t
    return -1j * complex(params.beta) * complex(drive_right) / d


def linearize(params: DeviceParams, pump: PumpSteadyState) -> LinearizedModel:
    """Pump-enhanced couplings and rates for the fluctuation dynamics."""
    return LinearizedModel(
        g_r=params.g0 * pump.alpha_r,
        g_l=params.g0 * pump.alpha_l,
        delta=pump.delta,
        beta=complex(params.beta),
        omega_m=params.omega_m,
        kappa=params.kappa,
        kappa_prime=params.kappa_prime,
        kappa_in=params.kappa_in,
        gamma_m=params.gamma_m,
    )
