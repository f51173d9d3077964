"""
Exception hierarchy for pwtest
Every error raised on purpose by the library derives from PwTestError
"""


class PwTestError(Exception):
    """Base class for all pwtest errors"""


class DimensionError(PwTestError, ValueError):
    """Array shapes do not conform (feature counts, projection sizes, input lengths)"""


class RankError(PwTestError, ValueError):
    """A matrix that must have full column rank does not"""


class EmptyInputError(PwTestError, ValueError):
    """A sample set or point cloud has no rows"""


class SizeLimitError(PwTestError, ValueError):
    """An exact oracle was asked to solve an instance beyond its brute-force limits"""


class ConfigError(PwTestError, ValueError):
    """Invalid configuration value, dataset specification or network layout"""


class DegenerateDataError(PwTestError, ValueError):
    """Data cannot support the requested computation (zero spread, non-finite entries)"""


class DivergenceError(PwTestError, ArithmeticError):
    """The SGD loop produced a non-finite objective"""

    def __init__(self, iteration: int, message: str = None):
        self.iteration = iteration
        super().__init__(message or f"Objective became non-finite at iteration {iteration}")
