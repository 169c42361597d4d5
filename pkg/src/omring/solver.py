"""Frequency-domain solver for the full two-waveguide, two-mode ring model.

The fluctuation operators are stacked as

    v = (b, a_R, a_L, b^dag, a_R^dag, a_L^dag)

and obey ``dv/dt = -M v - sqrt(2*kappa) I1 - sqrt(2*kappa') I2 - sqrt(gamma_m) Im``
with the 6x6 coupling matrix built by :func:`build_coupling_matrix`.  A probe at
rotating-frame frequency ``omega`` is solved through

    v(omega) = (-M + i*omega*1)^{-1} (sqrt(2*kappa) I1 + sqrt(2*kappa') I2
                                      + sqrt(gamma_m) Im)

and the waveguide outputs are ``O = sqrt(2*kappa) diag(0,1,1,0,1,1) v + I``.
Directed optical channels are ordered ``wg1-R, wg1-L, wg2-R, wg2-L``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, UnstableModelError
from .model import LinearizedModel
from .sweep import SweepTable

__all__ = [
    "CHANNELS",
    "CouplingMatrix",
    "StabilityReport",
    "PortScattering",
    "build_coupling_matrix",
    "stability_check",
    "scattering_matrix",
    "transmission_spectrum",
]

CHANNELS = ("wg1-R", "wg1-L", "wg2-R", "wg2-L")

# v-vector row of the intra-resonator mode each directed channel couples to
_CHANNEL_MODE = {"wg1-R": 1, "wg1-L": 2, "wg2-R": 1, "wg2-L": 2}

CONDITION_LIMIT = 1e12


def channel_index(channel: str) -> int:
    try:
        return CHANNELS.index(channel)
    except ValueError:
        raise ValueError(f"unknown channel {channel!r}; expected one of {CHANNELS}") from None


@dataclass(frozen=True)
class CouplingMatrix:
    """6x6 coupling matrix over (b, a_R, a_L, b^dag, a_R^dag, a_L^dag)."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (6, 6):
            raise ValueError(f"coupling matrix must be 6x6, got shape {m.shape}")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalues of the coupling matrix and the strict-stability verdict.

    The fluctuations obey ``dv/dt = -M v``, so the model is stable iff every
    eigenvalue of M has a strictly positive real part.  ``margin`` is
    ``min Re(lambda)``; zero margin (an undamped mode) is reported as not
    strictly stable.
    """

    eigenvalues: np.ndarray
    stable: bool
    margin: float


@dataclass(frozen=True)
class PortScattering:
    """Single-frequency scattering of the directed optical channels.

    ``s_optical[i, j]`` maps the annihilation input of channel ``j`` to the
    annihilation output of channel ``i`` (the phase-insensitive block);
    ``s_conjugate`` maps the conjugate inputs ``f^dag(-omega)`` to the same
    outputs (the phase-sensitive block); ``s_mech`` maps the mechanical noise
    pair ``(xi, xi^dag)`` to the optical outputs.
    """

    frequency: float
    delta: float
    s_optical: np.ndarray
    s_conjugate: np.ndarray
    s_mech: np.ndarray
    condition_number: float

    def optical(self, out_channel: str, in_channel: str) -> complex:
        return complex(self.s_optical[channel_index(out_channel), channel_index(in_channel)])

    def conjugate(self, out_channel: str, in_channel: str) -> complex:
        return complex(self.s_conjugate[channel_index(out_channel), channel_index(in_channel)])


def build_coupling_matrix(model: LinearizedModel) -> CouplingMatrix:
    """Assemble the 6x6 coupling matrix of the linearized dynamics.

    Mechanical diagonals carry ``omega_m -+ i*gamma_m/2``-type entries (field
    damping ``gamma_m/2``), optical diagonals carry the total decay
    ``kappa_t``, and the backscattering amplitude enters as ``beta`` and its
    conjugate on the two chirality off-diagonals.
    """
    gr = complex(model.g_r)
    gl = complex(model.g_l)
    beta = complex(model.beta)
    delta = model.delta
    kt = model.kappa_t
    wm = model.omega_m
    hg = model.gamma_m / 2.0
    m = np.array([
        [wm - 1j * hg, gr.conjugate(), gl.conjugate(), 0.0, gr, gl],
        [gr, -delta - 1j * kt, beta.conjugate(), gr, 0.0, 0.0],
        [gl, beta, -delta - 1j * kt, gl, 0.0, 0.0],
        [0.0, -gr.conjugate(), -gl.conjugate(), -wm - 1j * hg, -gr, -gl],
        [-gr.conjugate(), 0.0, 0.0, -gr.conjugate(), delta - 1j * kt, -beta],
        [-gl.conjugate(), 0.0, 0.0, -gl.conjugate(), -beta.conjugate(), delta - 1j * kt],
    ], dtype=complex)
    return CouplingMatrix(matrix=1j * m)


def stability_check(coupling: CouplingMatrix) -> StabilityReport:
    """Eigenvalue stability of ``dv/dt = -M v``.

    Instability is a reported state, not an error; callers that require a
    strictly stable model raise :class:`UnstableModelError` themselves.
    """
    eigenvalues = np.linalg.eigvals(coupling.matrix)
    margin = float(eigenvalues.real.min())
    return StabilityReport(eigenvalues=eigenvalues, stable=margin > 0.0, margin=margin)


def _require_stable(model: LinearizedModel) -> CouplingMatrix:
    coupling = build_coupling_matrix(model)
    report = stability_check(coupling)
    if not report.stable:
        raise UnstableModelError(
            f"model is not strictly stable (margin {report.margin:.3g}); "
            "no steady-state scattering exists",
            margin=report.margin,
        )
    return coupling


def _scattering_at(coupling: CouplingMatrix, model: LinearizedModel,
                   omega: float) -> PortScattering:
    a = -coupling.matrix + 1j * omega * np.eye(6)
    cond = float(np.linalg.cond(a))
    if not cond < CONDITION_LIMIT:
        raise NumericalError(
            f"(-M + i*omega*1) is numerically singular at omega={omega!r} "
            f"(condition number {cond:.3g}); probe sits on an undamped resonance",
            condition_number=cond,
        )
    t = np.linalg.inv(a)

    out_pref = np.array([math.sqrt(2 * model.kappa), math.sqrt(2 * model.kappa),
                         math.sqrt(2 * model.kappa_prime), math.sqrt(2 * model.kappa_prime)])
    in_pref = out_pref
    rows = np.array([_CHANNEL_MODE[c] for c in CHANNELS])

    s_opt = (out_pref[:, None] * t[np.ix_(rows, rows)] * in_pref[None, :]
             + np.eye(4, dtype=complex))
    s_con = out_pref[:, None] * t[np.ix_(rows, rows + 3)] * in_pref[None, :]
    s_mech = math.sqrt(model.gamma_m) * (out_pref[:, None] * t[np.ix_(rows, [0, 3])])

    for arr in (s_opt, s_con, s_mech):
        arr.flags.writeable = False
    return PortScattering(
        frequency=float(omega),
        delta=float(omega + model.delta),
        s_optical=s_opt,
        s_conjugate=s_con,
        s_mech=s_mech,
        condition_number=cond,
    )


def scattering_matrix(model: LinearizedModel, omega: float) -> PortScattering:
    """Full multi-port scattering at rotating-frame frequency ``omega``.

    The probe detuning from the optical resonance is ``delta = omega + delta``
    of the model.  Raises :class:`UnstableModelError` for non-decaying models
    and :class:`NumericalError` when the solve is ill-conditioned.
    """
    coupling = _require_stable(model)
    return _scattering_at(coupling, model, omega)


def transmission_spectrum(model: LinearizedModel, omega_grid, in_channel: str,
                          out_channel: str, *, unwrap: bool = False,
                          threads: int = 1) -> SweepTable:
    """Evaluate one scattering element over a frequency grid.

    Rows are ``(omega, delta, re, im, abs2, phase, flag)``; a nonzero flag
    marks points where the solve failed (amplitudes are NaN there) while the
    sweep continues.  ``unwrap=True`` unwraps the phase column along the grid.
    """
    i_out = channel_index(out_channel)
    i_in = channel_index(in_channel)
    omega_grid = [float(w) for w in omega_grid]
    coupling = _require_stable(model) if omega_grid else None

    def one(omega):
        try:
            s = _scattering_at(coupling, model, omega)
        except NumericalError:
            return omega, (np.nan, 1.0)
        return omega, (s.s_optical[i_out, i_in], 0.0)

    if threads > 1 and len(omega_grid) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            computed = list(pool.map(one, omega_grid))
    else:
        computed = [one(w) for w in omega_grid]

    amps = np.array([amp for _, (amp, _) in computed], dtype=complex)
    flags = [flag for _, (_, flag) in computed]
    phases = np.angle(amps)
    if unwrap and len(omega_grid) > 1:
        good = ~np.isnan(amps)
        phases[good] = np.unwrap(phases[good])

    rows = []
    for k, omega in enumerate(omega_grid):
        amp = amps[k]
        rows.append((omega, omega + model.delta, amp.real, amp.imag,
                     abs(amp) ** 2, float(phases[k]), flags[k]))
    return SweepTable(
        columns=("omega", "delta", "re", "im", "abs2", "phase", "flag"),
        rows=rows,
        metadata={
            "in_channel": in_channel,
            "out_channel": out_channel,
            "phase_unwrapped": str(bool(unwrap)).lower(),
        },
    )
