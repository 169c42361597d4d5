"""Exception hierarchy for the omring package."""


class OmringError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(OmringError):
    """Invalid run configuration (bad file, bad key, invalid parameter)."""


class DegenerateParameterError(OmringError):
    """The pump steady-state linear system is exactly singular."""


class ConvergenceError(OmringError):
    """An iterative computation failed to converge.

    Raised by the self-consistent detuning iteration (possible multistable or
    otherwise invalid pump regime) and by non-converging quadratures.
    """


class UnstableModelError(OmringError):
    """The linearized model is not strictly stable."""

    def __init__(self, message, margin=None):
        super().__init__(message)
        self.margin = margin


class NumericalError(OmringError):
    """A numerical computation failed (ill-conditioned solve, bad quadrature)."""

    def __init__(self, message, condition_number=None, achieved_tolerance=None):
        super().__init__(message)
        self.condition_number = condition_number
        self.achieved_tolerance = achieved_tolerance


class UndefinedPhaseError(OmringError):
    """Phase requested at a point where the amplitude vanishes."""


class DivergenceError(OmringError):
    """Time-domain integration diverged (instability confirmation)."""

    def __init__(self, message, time=None, norm=None):
        super().__init__(message)
        self.time = time
        self.norm = norm
