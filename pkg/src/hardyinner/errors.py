"""Exception types raised by the library.

Validation problems subclass ``ValueError``; the rest signal numerical
failures and are reported by the CLI with exit code 3.
"""


class HardyError(Exception):
    """Base class for numerical failures."""


class BoundaryNotAdmissible(HardyError, ValueError):
    """A kernel (or a derivative of one) was requested at a boundary point where it has infinite norm."""


class TailBoundUnavailable(HardyError):
    """No usable tail bound exists for the requested truncation."""


class SingularGram(HardyError):
    """Gram matrix too ill-conditioned for a meaningful solve."""

    def __init__(self, message, condition=None, epsilon=None):
        super().__init__(message)
        self.condition = condition
        self.epsilon = epsilon


class DegenerateFit(HardyError):
    """Log-log fit impossible because the function vanishes on the samples."""


class UnsupportedSpace(HardyError):
    """Operation needs a closed form that this weight does not have."""


class ZeroPolynomial(HardyError, ValueError):
    """The zero polynomial was passed where a nonzero one is required."""


class OptimizerDiverged(HardyError):
    """A local optimization run produced non-finite or runaway iterates."""
