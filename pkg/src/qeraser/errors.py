"""Exception and warning types shared across the package."""


class QEraserError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(QEraserError, ValueError):
    pass


class NonUnitary(QEraserError, ValueError):
    def __init__(self, max_deviation, tol):
        self.max_deviation = float(max_deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not unitary: max |U U^dagger - I| = {self.max_deviation:.3e} "
            f"exceeds {self.tol:.0e}"
        )


class GridMismatch(QEraserError, ValueError):
    pass


class WindowOutOfGrid(QEraserError, ValueError):
    pass


class AliasingRisk(QEraserError, RuntimeError):
    """Raised when a periodic spectral run would be contaminated by wrap-around."""


class ConfigError(QEraserError, ValueError):
    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class ParameterOutOfRegime(UserWarning):
    """Far-field closed forms evaluated where their approximations are poor."""
