"""Exception types shared across the package.

Each error carries the process exit code the command-line front end uses.
"""


class ESQPTError(Exception):
    exit_code = 1


class InvalidParameterError(ESQPTError, ValueError):
    exit_code = 2


class ConvergenceError(ESQPTError, ArithmeticError):
    exit_code = 3

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class CapacityError(ESQPTError):
    exit_code = 4


class AliasingError(InvalidParameterError):
    """Time step too coarse for the spectral content being sampled."""


class BracketingError(InvalidParameterError):
    """Search interval does not enclose an interior minimum."""


class InsufficientOscillationsError(InvalidParameterError):
    pass


class NoPeakError(ESQPTError):
    """No interior maximum of |r(t)| inside the sampled window."""
    exit_code = 3
