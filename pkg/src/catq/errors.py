"""Exception and warning classes raised by catq."""

import numpy as np


class CatqError(Exception):
    """Base class for all catq errors."""


class DimensionMismatchError(CatqError, ValueError):
    pass


class NonFiniteError(CatqError, ValueError):
    pass


class DefectiveMatrixError(CatqError, np.linalg.LinAlgError):
    """The eigenvector matrix is too ill-conditioned to treat the input as diagonalizable."""


class NumericallySingularError(CatqError, np.linalg.LinAlgError):
    pass


class ZeroVectorError(CatqError, ValueError):
    pass


class EmptyInputError(CatqError, ValueError):
    pass


class TimeOutOfRangeError(CatqError, ValueError):
    pass


class TimeOrderError(CatqError, ValueError):
    pass


class DegenerateWeightsError(CatqError, ValueError):
    pass


class VanishingOverlapError(CatqError, ArithmeticError):
    pass


class NotNormalizedError(CatqError, ValueError):
    pass


class GridTooCoarseError(CatqError, ValueError):
    pass


class GridMismatchError(CatqError, ValueError):
    pass


class MatrixParseError(CatqError, ValueError):
    """Malformed matrix file. ``line`` and ``column`` are 1-based; column may be None."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", column {column}"
            loc += ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


class ConfigError(CatqError, ValueError):
    pass


class UnboundedSpectrumWarning(UserWarning):
    """Imaginary parts of the continuum spectrum grow without bound."""


class GridExtentWarning(UserWarning):
    pass
