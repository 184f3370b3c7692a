"""Exception and warning types shared across the package."""


class StochblochError(Exception):
    """Base class for all package-specific errors."""


class NumericalError(StochblochError):
    """Base class for runtime numerical failures (CLI exit code 3)."""


class SingularSystem(NumericalError):
    """Trace-constrained steady-state solve is rank deficient beyond tolerance."""


class PropagationDiverged(NumericalError):
    """Supervector norm grew by more than 10x during propagation."""


class NotHurwitz(NumericalError):
    """Drift matrix has an eigenvalue with non-negative real part."""


class SvdFailed(NumericalError):
    """Singular value decomposition did not converge."""


class InsufficientSamples(NumericalError):
    """Too few Monte Carlo samples for a usable estimator."""


class FitNotConverged(NumericalError):
    """Least-squares fit exhausted its iteration budget.

    Carries the last residual so callers can report it; no partial fit
    parameters are exposed.
    """

    def __init__(self, message, residual=None, n_iter=None):
        super().__init__(message)
        self.residual = residual
        self.n_iter = n_iter


class CourantViolation(StochblochError):
    """FDTD configuration violates the Courant stability bound."""


class ConfigError(StochblochError):
    """Configuration schema violation (CLI exit code 2).

    ``field`` holds the dotted path of the offending key, e.g.
    ``"system.t1_ps"``.
    """

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class NegativePower(ConfigError):
    """Excitation power must be non-negative."""

    def __init__(self, message="excitation power must be >= 0"):
        ConfigError.__init__(self, "power", message)


class TailNotDecayed(UserWarning):
    """Correlation tail has not decayed at tau_max; line shapes may be biased."""
