"""Exception hierarchy.

Three families map onto the CLI exit codes and HTTP statuses:
config errors (exit 2), domain/physics errors (exit 3), and numerical
convergence errors (exit 4).
"""


class OmitChargeError(Exception):
    """Base class for all package errors."""


class ConfigError(OmitChargeError):
    """Malformed or rejected configuration document."""


class DomainError(OmitChargeError):
    """Input is syntactically fine but physically outside the model's domain."""


class ParameterError(DomainError):
    """Non-physical parameter value (non-positive frequency, negative mass, ...)."""


class DerivationError(DomainError):
    """Detuning-policy resolution failed (no converged zero-charge steady state)."""


class SteadyStateDomainError(DomainError):
    """No real cubic root in [0, r0): the linearized Coulomb model is invalid."""

    def __init__(self, message, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class FormulaDomainError(DomainError):
    """Tuning-point radicand negative: no absorption flank maxima exist."""

    def __init__(self, message, beta=None, kappa=None, gamma_m=None):
        super().__init__(message)
        self.beta = beta
        self.kappa = kappa
        self.gamma_m = gamma_m


class SingularityError(DomainError):
    """Response denominator vanished (unreachable for physical damping rates)."""


class WidthOutOfRangeError(DomainError):
    """Measured width is not attainable on the scanned charge bracket."""

    def __init__(self, message, attainable=None):
        super().__init__(message)
        self.attainable = attainable


class ConvergenceError(OmitChargeError):
    """A numerical routine failed to reach its accuracy target."""


class DivergenceError(ConvergenceError):
    """Time-domain integration left the finite domain."""

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class NotSettledError(ConvergenceError):
    """Trajectory has not reached steady oscillation within the demod window."""
