"""Exception hierarchy shared across the package."""


class RolewiczError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceeded(RolewiczError):
    """An enumeration would exceed the configured resource budget."""

    def __init__(self, what: str, needed: int, budget: int):
        super().__init__(f"{what}: needs {needed} > budget {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class FamilyError(RolewiczError, ValueError):
    """A map or family fails validation (monotonicity, almost-disjointness)."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class NonZeroConditionViolation(RolewiczError):
    """Some class sum c([sigma]_i) vanishes at the requested level."""

    def __init__(self, word, i, value=0):
        super().__init__(f"class sum vanishes for word {tuple(word)} at base index {i}")
        self.word = tuple(word)
        self.i = i
        self.value = value


class CertificationError(RolewiczError):
    """A construction was requested for an operator that is not certified."""


class ExactnessError(RolewiczError, AssertionError):
    """An identity that must hold exactly did not; indicates an implementation bug."""


class ConfigError(RolewiczError, ValueError):
    """Invalid run configuration; ``path`` locates the offending JSON field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
