"""Exception types shared across the package.

Every domain error raised by the library derives from :class:`MznetError`,
so callers (and the CLI) can distinguish domain failures from programming
errors with a single ``except`` clause.
"""


class MznetError(Exception):
    """Base class for all domain errors raised by this package."""


class NonUnitary(MznetError):
    """A matrix that must be unitary deviates from unitarity beyond tolerance."""


class DimensionMismatch(MznetError):
    """Array or matrix dimensions are inconsistent."""


class MixedModeUnsupported(MznetError):
    """An input mode carries both a displacement and squeezing.

    The moment-tensor simplification ``gamma = conj(b)`` requires every mode
    to be either coherent or squeezed vacuum, never both.
    """


class DegenerateSlope(MznetError):
    """The mean-value slope of some arm vanishes, so the moment-based
    covariance is singular (pole of the closed-form inverse moment matrix)."""


class PhaseMismatch(MznetError):
    """A phase-matched closed form was called with nonzero phase offsets."""


class SingularInformation(MznetError):
    """Some parameter direction carries no Fisher information."""


class Infeasible(MznetError):
    """A resource budget cannot be satisfied."""


class NonConvergent(MznetError):
    """No optimizer restart reached the convergence tolerance."""
