"""Exception types raised by the genw library."""


class GenWError(ValueError):
    """Base class for invalid input to genw routines."""


class ParameterError(GenWError):
    """Malformed or inadmissible parameters."""


class DomainError(GenWError):
    """Evaluation requested at a point where a function is undefined."""


class PochhammerPoleError(GenWError):
    """A Pochhammer symbol in a denominator vanishes for a term that is needed.

    ``side`` names which side of an identity failed, when that matters.
    """

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class CenterParameterError(GenWError):
    """Centered parameter q_i lies in {0, -1, ..., -(k-1)}."""


class CenterWeightError(GenWError):
    """Centered weight w_i is zero."""
