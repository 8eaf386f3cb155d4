"""Exception types shared across the package."""


class Bvp8Error(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(Bvp8Error, ValueError):
    """Invalid setup: degenerate domain, bad grid size, mismatched domains."""


class SingularSystemError(Bvp8Error, RuntimeError):
    """A linear system turned out numerically rank deficient."""


class EvaluationError(Bvp8Error, RuntimeError):
    """A residual evaluation produced a non-finite value."""


class NotFittedError(Bvp8Error, RuntimeError):
    """An estimator method that needs a fitted model was called before fit()."""
