"""Exception hierarchy shared across the package.

Each branch maps to one CLI exit code: ConfigError -> 2 (usage),
DataError -> 3, NumericError -> 4, ModelFormatError and OS errors -> 5.
"""


class FansError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(FansError):
    """Invalid option or option combination."""


class DataError(FansError):
    """Problem with input data."""


class EmptyClassError(DataError):
    """An operation needed samples from a class that has none."""


class InvalidDataError(DataError):
    """Non-finite, non-numeric or otherwise unusable values."""


class ShapeError(DataError):
    """Dimension mismatch between inputs."""


class DegenerateLabelsError(DataError):
    """Labels contain a single class where both are required."""


class StratificationError(DataError):
    """A class is too small to stratify into the requested folds/parts."""


class NumericError(FansError):
    """Numerical failure during optimization."""


class ConvergenceError(NumericError):
    """Solver failed to converge within its iteration budget."""


class ModelFormatError(FansError):
    """Model file is missing, corrupt, lossy or has the wrong version."""
