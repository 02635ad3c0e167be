"""Exception types shared across the package.

Two families matter for the CLI exit-code contract: bad input data
(exit 1) and numerical failures on valid input (exit 2).
"""


class InputError(ValueError):
    """Malformed or inconsistent input data (files, dimensions, indices)."""


class NumericalError(RuntimeError):
    """A numerical precondition failed on structurally valid input."""


class NotPositiveSemidefiniteError(NumericalError):
    """A matrix required to be positive (semi)definite is not."""


class ConvergenceWarning(UserWarning):
    """An iterative procedure stopped at its sweep/iteration cap."""


class DataWarning(UserWarning):
    """Suspicious but tolerable input data (e.g. conflicting duplicates)."""
