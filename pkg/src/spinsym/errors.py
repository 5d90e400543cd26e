"""Error types shared across the package.

Invalid user input is reported with plain ValueError; the classes here mark
conditions a caller may want to handle differently (retry with another
method, raise a resource limit, ...).
"""


class ResourceCapError(RuntimeError):
    """A configured size cap would be exceeded; nothing was computed."""


class SectorCapError(ResourceCapError):
    """Sector enumeration refused: dimension exceeds the sector cap."""


class DenseCapError(ResourceCapError):
    """Dense eigensolve refused: dimension exceeds the dense cap.

    Callers should switch to the iterative (Lanczos) path.
    """


class ConvergenceError(RuntimeError):
    """Iterative eigensolver failed to reach the requested residual."""

    def __init__(self, message: str, best_residual: float | None = None):
        super().__init__(message)
        self.best_residual = best_residual
