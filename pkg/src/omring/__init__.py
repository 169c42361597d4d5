"""Non-reciprocal transmission, thermal noise and squeezing of an optically
pumped optomechanical ring resonator coupled to one or two waveguides.

The package computes classical pump steady states, linearized multi-port
scattering in the frequency domain, closed-form single-waveguide transmission,
thermal-noise floors, phase-sensitive (squeezing) corrections, isolation
bandwidths and operating-regime labels, plus an independent time-domain RK4
oracle used to cross-check every frequency-domain result.
"""

__version__ = "0.1.0"

from .analysis import (
    BandwidthResult,
    RegimeClassification,
    bandwidth_contour,
    classify_regime,
    isolation_bandwidth,
    pump_imbalance_curve,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DegenerateParameterError,
    DivergenceError,
    NumericalError,
    OmringError,
    UndefinedPhaseError,
    UnstableModelError,
)
from .model import (
    DeviceParams,
    LinearizedModel,
    PumpDrive,
    PumpSteadyState,
    cancellation_drive,
    linearize,
    steady_state_pump,
)
from .noise import NoiseReport, noise_power, noise_spectral_density
from .oracle import Probe, TimeDomainRun, time_domain_response, time_domain_responses
from .solver import (
    CHANNELS,
    CouplingMatrix,
    PortScattering,
    StabilityReport,
    build_coupling_matrix,
    scattering_matrix,
    stability_check,
    transmission_spectrum,
)
from .squeezing import (
    PhaseSensitivePair,
    appendix_coefficients,
    squeezing_ratio,
    squeezing_ratio_spectrum,
)
from .sweep import SweepTable
from .toy import (
    ToyTransmission,
    toy_isolation_contrast,
    toy_phase_shift,
    toy_transmission,
)

__all__ = [
    "__version__",
    "BandwidthResult",
    "CHANNELS",
    "ConfigError",
    "ConvergenceError",
    "CouplingMatrix",
    "DegenerateParameterError",
    "DeviceParams",
    "DivergenceError",
    "LinearizedModel",
    "NoiseReport",
    "NumericalError",
    "OmringError",
    "PhaseSensitivePair",
    "PortScattering",
    "Probe",
    "PumpDrive",
    "PumpSteadyState",
    "RegimeClassification",
    "StabilityReport",
    "SweepTable",
    "TimeDomainRun",
    "ToyTransmission",
    "UndefinedPhaseError",
    "UnstableModelError",
    "appendix_coefficients",
    "bandwidth_contour",
    "build_coupling_matrix",
    "cancellation_drive",
    "classify_regime",
    "isolation_bandwidth",
    "linearize",
    "noise_power",
    "noise_spectral_density",
    "pump_imbalance_curve",
    "scattering_matrix",
    "squeezing_ratio",
    "squeezing_ratio_spectrum",
    "stability_check",
    "steady_state_pump",
    "time_domain_response",
    "time_domain_responses",
    "toy_isolation_contrast",
    "toy_phase_shift",
    "toy_transmission",
    "transmission_spectrum",
]
