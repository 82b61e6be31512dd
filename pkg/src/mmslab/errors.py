"""Exception types shared across the package."""


class UsageError(ValueError):
    """Bad arguments: out-of-range parameters, mismatched moduli, unmet preconditions."""


class InvalidSpecError(UsageError):
    """A double-interval parameter lies outside its admissible range."""

    def __init__(self, field, value, message=None):
        self.field = field
        self.value = value
        super().__init__(message or f"invalid {field}={value!r}")


class BudgetExhausted(RuntimeError):
    """Raised internally when a search runs out of its node budget."""
