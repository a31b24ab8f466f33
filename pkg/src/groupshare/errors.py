"""Shared exception types."""


class BudgetExhausted(RuntimeError):
    """A rejection-sampling or retry budget ran out before success."""
