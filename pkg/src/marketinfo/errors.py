"""Exception types raised across the package."""


class MarketInfoError(ValueError):
    """Base class for input and domain errors."""


class InputTooShortError(MarketInfoError):
    pass


class EmptyTableError(MarketInfoError):
    pass


class InconsistentProbabilitiesError(MarketInfoError):
    pass


class UnobservedPrefixError(MarketInfoError):
    """A prefix pattern never occurs, so the gamma null law does not apply."""

    def __init__(self, pattern, index):
        self.pattern = tuple(pattern)
        self.index = index
        bits = "".join(str(b) for b in self.pattern)
        super().__init__(
            f"prefix pattern {bits} (index {index}) is never observed; "
            "reduce L or lengthen the window"
        )


class BudgetExceededError(MarketInfoError):
    def __init__(self, cost, budget):
        self.cost = cost
        self.budget = budget
        super().__init__(
            f"nested sum needs {cost:.3g} terms, above the budget of {budget:.3g}"
        )


class CsvFormatError(MarketInfoError):
    def __init__(self, row, message):
        self.row = row
        super().__init__(f"row {row}: {message}")
