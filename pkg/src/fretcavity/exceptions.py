"""Custom exceptions for the fretcavity simulator."""


class FretCavityError(Exception):
    """Base exception for all fretcavity errors."""

    pass


class NonHermitianError(FretCavityError):
    """Raised when a matrix expected to be Hermitian is not."""

    def __init__(self, deviation: float, tolerance: float):
        self.deviation = deviation
        self.tolerance = tolerance
        self.message = (
            f"Matrix is not Hermitian: max|A - A^H| = {deviation:.3e} "
            f"(tolerance {tolerance:.1e})"
        )
        super().__init__(self.message)


class NoConvergenceError(FretCavityError):
    """Raised when an eigenvalue iteration fails."""

    def __init__(self, reason: str = "Eigenvalue iteration did not converge"):
        self.reason = reason
        self.message = reason
        super().__init__(self.message)


class SingularMatrixError(FretCavityError):
    """Raised when a linear system is singular or numerically rank-deficient."""

    def __init__(self, dim: int, reason: str = "Matrix is singular"):
        self.dim = dim
        self.reason = reason
        self.message = f"{reason} (dimension {dim})"
        super().__init__(self.message)


class DimensionMismatchError(FretCavityError):
    """Raised when operand dimensions are incompatible."""

    def __init__(self, expected: object, got: object, what: str = "operand"):
        self.expected = expected
        self.got = got
        self.message = f"Dimension mismatch for {what}: expected {expected}, got {got}"
        super().__init__(self.message)


class ZeroSeparationError(FretCavityError):
    """Raised when the dipole shift is requested at zero separation."""

    def __init__(self) -> None:
        self.message = "Dipole-dipole shift diverges at zero separation"
        super().__init__(self.message)


class UnphysicalMutualDecayError(FretCavityError):
    """Raised when |gamma_bar| exceeds the bound set by the emitter rates."""

    def __init__(self, gamma_bar: float, bound: float):
        self.gamma_bar = gamma_bar
        self.bound = bound
        self.message = (
            f"Unphysical mutual decay: |gamma_bar| = {abs(gamma_bar):.6g} "
            f"exceeds {bound:.6g}"
        )
        super().__init__(self.message)


class NonUniqueSteadyStateError(FretCavityError):
    """Raised when the Liouvillian kernel is degenerate."""

    def __init__(self, zero_modes: int):
        self.zero_modes = zero_modes
        self.message = f"Steady state is not unique ({zero_modes} zero modes)"
        super().__init__(self.message)


class UnstableError(FretCavityError):
    """Raised when a generator has an eigenvalue with non-negative real part."""

    def __init__(self, max_real_part: float, what: str = "generator"):
        self.max_real_part = max_real_part
        self.message = f"Unstable {what}: max Re(lambda) = {max_real_part:.6g}"
        super().__init__(self.message)


class StepUnstableError(FretCavityError):
    """Raised when fixed-step time integration becomes inaccurate."""

    def __init__(self, reason: str):
        self.reason = reason
        self.message = f"Time step unstable: {reason}"
        super().__init__(self.message)


class UnsupportedPumpError(FretCavityError):
    """Raised when an operation does not support the requested pump mode."""

    def __init__(self, mode: str, operation: str):
        self.mode = mode
        self.operation = operation
        self.message = f"Pump mode '{mode}' is not supported by {operation}"
        super().__init__(self.message)


class SingularResonanceError(FretCavityError):
    """Raised at a pole of a weak-drive analytic expression."""

    def __init__(self, formula: str, denominator: float):
        self.formula = formula
        self.denominator = denominator
        self.message = f"{formula} diverges (denominator {denominator:.3e})"
        super().__init__(self.message)


class ZeroDetuningError(FretCavityError):
    """Raised when the optimal cavity detuning formula is singular."""

    def __init__(self, g_D: float, g_A: float):
        self.g_D = g_D
        self.g_A = g_A
        self.message = (
            f"Optimal detuning undefined at Delta = 0 for g_D = {g_D} != g_A = {g_A}"
        )
        super().__init__(self.message)


class NonPhysicalStateError(FretCavityError):
    """Raised when a density matrix violates positivity, trace or Hermiticity."""

    def __init__(self, reason: str):
        self.reason = reason
        self.message = f"Non-physical state: {reason}"
        super().__init__(self.message)


class ConfigError(FretCavityError):
    """Raised when a sweep configuration is invalid."""

    def __init__(self, reason: str, key: str | None = None):
        self.reason = reason
        self.key = key
        self.message = f"Config error ({key}): {reason}" if key else f"Config error: {reason}"
        super().__init__(self.message)


class ParseError(ConfigError):
    """Raised when a configuration file cannot be parsed."""

    def __init__(self, line: int, key: str | None, reason: str = "Invalid line"):
        self.line = line
        self.reason = reason
        self.key = key
        self.message = f"Parse error on line {line} ({key or '?'}): {reason}"
        Exception.__init__(self, self.message)
