"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical/physical domain of an operation."""


class ConvergenceError(RuntimeError):
    """A quadrature or series failed to reach its accuracy target."""


class SeriesValidityError(ValueError):
    """A low-temperature series was requested outside its trusted band."""


class MaterialFileError(ValueError):
    """A material description file failed to parse or validate."""


class UndefinedRatioError(ArithmeticError):
    """A relative quantity was requested with a vanishing normalizer."""
