"""Shared error types."""


class BudgetExceededError(RuntimeError):
    """An enumeration or brute-force sum outgrew its configured cap."""
