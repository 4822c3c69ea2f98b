"""Error and warning types raised across the package."""


class DomainError(ValueError):
    """A value lies outside the physically admissible domain."""


class NearDegenerateRoots(ArithmeticError):
    """Two or more poles are too close for the simple-pole residue formula.

    The offending roots are kept on ``roots`` so the caller can fall back to
    the confluent inversion without solving the cubic again.
    """

    def __init__(self, message, roots=None):
        super().__init__(message)
        self.roots = roots


class ConvergenceError(ArithmeticError):
    """The numerical Laplace inversion did not reach its error target."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class DegenerateSpectrumError(ArithmeticError):
    """Eigenvalues coincide while the eigenvectors still move with the parameter."""


class IdentityViolation(AssertionError):
    """``F_phi == C_l**2`` failed on a metric series."""

    def __init__(self, message, index=None, time=None):
        super().__init__(message)
        self.index = index
        self.time = time


class ConfigError(ValueError):
    """Malformed sweep specification or CLI configuration."""


class UnknownFigure(KeyError):
    pass


class GridWarning(RuntimeWarning):
    """The BLP integral changed noticeably when the time grid was refined."""


class StabilityWarning(RuntimeWarning):
    """A pole was found with positive real part."""
