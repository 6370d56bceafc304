"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class ToeplitzSpectraError(Exception):
    exit_code = 1


class SymbolError(ToeplitzSpectraError, ValueError):
    """Bad symbol data: non-finite samples, violated structural flags."""


class ConfigError(ToeplitzSpectraError, ValueError):
    exit_code = 2


class SingularMatrixError(ToeplitzSpectraError, ArithmeticError):
    pass


class NotHermitianError(ToeplitzSpectraError, ValueError):
    pass


class BreakdownError(ToeplitzSpectraError, ArithmeticError):
    """Levinson recursion hit a non-positive prediction error."""


class ConvergenceError(ToeplitzSpectraError, ArithmeticError):
    pass


class BoundaryRootError(ToeplitzSpectraError, ValueError):
    """A root of K lies on (or within tolerance of) the unit circle."""
    exit_code = 3


class UnbalancedSplitError(ToeplitzSpectraError, ValueError):
    """K does not have exactly n0 roots inside the unit disk."""
    exit_code = 3


class MultipleRootError(ToeplitzSpectraError, ValueError):
    """Closed-form band inverse requires simple inside roots.

    Perturbing the symbol coefficients by about ``suggested_eps`` usually
    splits the cluster; this is never done automatically.
    """
    exit_code = 4
    suggested_eps = 1e-6


class SingularCorrectionError(ToeplitzSpectraError, ArithmeticError):
    """I - H is numerically singular: N is below the usable threshold."""
    exit_code = 5


class ExcludedLevelError(ToeplitzSpectraError, ValueError):
    """The level sits on a critical value of the symbol or on f(0), f(pi)."""


class ApproximationError(ToeplitzSpectraError, ValueError):
    pass


class MarginError(ToeplitzSpectraError, ValueError):
    """Approximation error is not below half the symbol minimum."""
