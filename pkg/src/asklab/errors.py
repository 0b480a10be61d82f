"""Exception types shared across the package."""


class AskLabError(Exception):
    """Base class for all errors raised by asklab."""


class NotPrime(AskLabError, ValueError):
    pass


class BudgetExceeded(AskLabError, RuntimeError):
    """An enumeration would visit more points than the configured budget."""

    def __init__(self, needed, budget, what="points"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"{what}: need {needed}, budget is {budget}")


class ShapeMismatch(AskLabError, ValueError):
    def __init__(self, message, where=None):
        self.where = where
        if where is not None:
            message = f"{message} at {where}"
        super().__init__(message)


class NotAlternating(AskLabError, ValueError):
    pass


class NonIntegral(AskLabError, ArithmeticError):
    pass


class NotAnAction(AskLabError, ValueError):
    pass


class NotClosed(AskLabError, ValueError):
    def __init__(self, message, pair=None):
        self.pair = pair
        super().__init__(message)


class NotNilpotentShape(AskLabError, ValueError):
    pass


class CharTooSmall(AskLabError, ValueError):
    pass


class BadDenominator(AskLabError, ValueError):
    pass


class InsufficientSamples(AskLabError, ValueError):
    pass


class DecompositionInvalid(AskLabError, ValueError):
    def __init__(self, q, lhs, rhs):
        self.q = q
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"decomposition fails at q={q}: {lhs} != {rhs}")


DEFAULT_BUDGET = 10**7


def check_budget(needed, budget=None, what="points"):
    if budget is None:
        budget = DEFAULT_BUDGET
    if needed > budget:
        raise BudgetExceeded(needed, budget, what)
