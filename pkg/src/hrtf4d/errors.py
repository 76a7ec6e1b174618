"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ManifestError(ValueError):
    """A dataset manifest or auxiliary file is missing or malformed."""


class DimensionMismatchError(ValueError):
    """Array shapes or grids that must agree do not."""


class UnderdeterminedError(RuntimeError):
    """The weighted least-squares system has rank below the coefficient count."""


class MemoryBudgetError(RuntimeError):
    """A design matrix would exceed the configured memory budget."""


class ZeroDenominatorError(ArithmeticError):
    """A relative-error denominator (reference energy or mean) is zero."""
