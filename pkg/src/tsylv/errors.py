"""Exception types raised by the solvers."""


class TsylvError(Exception):
    """Base class for all package errors."""


class SingularOperatorError(TsylvError):
    """The tensor operator (or a triangular block of it) is numerically singular.

    Attributes
    ----------
    witness : tuple
        Identifies the offending eigenvalues / diagonal entries. For the
        operator-level checks this is the tuple of eigenvalues whose
        combination vanishes; for back substitution it is the pivot index.
    indices : tuple or None
        Positions of the witness entries on the respective diagonals.
    """

    def __init__(self, message, witness=None, indices=None):
        super().__init__(message)
        self.witness = witness
        self.indices = indices


class ConvergenceError(TsylvError):
    """A Schur or QZ iteration did not converge."""


class OracleSizeError(TsylvError):
    """The explicitly assembled operator would exceed the configured size cap."""
