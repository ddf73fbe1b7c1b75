"""Exception hierarchy shared by the models, the oracle and the CLI."""


class QFridgeError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(QFridgeError, ValueError):
    """Invalid or unknown configuration entry."""

    exit_code = 2


class PhysicsConstraintError(QFridgeError, ValueError):
    """Parameters outside the physically admissible domain."""

    exit_code = 3


class ConvergenceError(QFridgeError, RuntimeError):
    """A numerical procedure did not reach its tolerance."""

    exit_code = 4


class DegenerateKernelError(ConvergenceError):
    """The generator has more than one stationary state."""


class NoInteriorMaximumError(ConvergenceError):
    """A maximization ended on the boundary of its search interval."""
