"""Exception types shared across the package."""


class RsrrError(Exception):
    """Base class for all package-specific errors."""


class SingularMatrix(RsrrError):
    """A factorization hit a (numerically) singular matrix.

    When raised during contour sampling this usually means a node landed on
    an eigenvalue; the attached ``node_index`` lets the caller perturb and
    retry.
    """

    def __init__(self, message, node_index=None):
        super().__init__(message)
        self.node_index = node_index


class SingularReduced(SingularMatrix):
    """Singular reduced matrix at a quadrature node of the small problem."""


class ConvergenceFailure(RsrrError):
    """An iterative LAPACK routine (SVD/eig) failed to converge."""


class InvalidParameter(RsrrError):
    """A structurally invalid argument (bad count, non-positive size, ...)."""


class PoleEvaluation(RsrrError):
    """Evaluation requested at (or too close to) a pole of a scalar term."""


class DimensionMismatch(RsrrError):
    """Matrices that must share a dimension do not."""


class ParseError(RsrrError):
    """Malformed Matrix Market content; carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedField(RsrrError):
    """Matrix Market field/symmetry combination outside the supported set."""


class EmptyBasis(RsrrError):
    """Truncated SVD of a numerically zero matrix leaves no basis vectors."""


class NonIntegerWinding(RsrrError):
    """Winding-number eigencount too far from an integer to trust.

    Signals an under-resolved quadrature or an eigenvalue sitting close to
    the contour; the solver halts rather than guessing a count.
    """

    def __init__(self, message, winding=None):
        super().__init__(message)
        self.winding = winding


class RankCollapse(RsrrError):
    """Requested truncation rank reaches into the numerical null space."""


class ConfigError(RsrrError):
    """Run-configuration validation failure; carries the offending field path."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
