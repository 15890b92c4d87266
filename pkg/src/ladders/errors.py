"""Exception types shared across the package."""


class LaddersError(Exception):
    """Base class for all errors raised by this package."""


class ConvergenceError(LaddersError):
    """A dense numerical routine failed to converge or produced non-finite output."""


class DegenerateSpectrumError(LaddersError):
    """Eigenvalues are too close for a biorthogonal dual basis to be reliable."""


class DegenerateLadderError(LaddersError):
    """A ladder normalizer vanished; carries the index of the first zero weight."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"ladder weight beta_{index} vanishes")


class SingularOperatorError(LaddersError):
    """An operator that must be invertible is singular or numerically near-singular."""


class ConfigError(LaddersError):
    """A family config is malformed; carries the offending line when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")
