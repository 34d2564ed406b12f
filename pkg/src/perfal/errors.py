"""Exception types shared across the toolkit."""


class PerfalError(Exception):
    """Base class for all toolkit errors."""


class ParseError(PerfalError):
    """Irrecoverable Java syntax failure, with source position."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"{message} (line {line}, col {col})"
        super().__init__(message)


class ConfigError(PerfalError):
    """Invalid or inconsistent configuration."""


class ShapeError(PerfalError):
    """Input dimensions do not match the fitted model."""


class SingularKernel(PerfalError):
    """Kernel matrix stayed non-positive-definite at the jitter ceiling."""


class BetaTooLarge(PerfalError):
    """Katz decay factor at or above 1/spectral-radius; the series diverges."""


class TestLabelLeak(PerfalError):
    """A test-set label was requested outside of scoring."""


class MissingLabel(PerfalError):
    """A graph has no label row."""


class MissingFile(PerfalError):
    """A label row references a file that is absent or unparseable."""
