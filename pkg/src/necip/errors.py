"""Exceptions shared across the package."""


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed the configured budget.

    Raised instead of silently sampling; the caller should shrink the
    instance or raise the budget (``NECIP_BUDGET`` or the ``budget=``
    keyword).
    """


class StructureError(ValueError):
    """A branching program or formula violates a structural precondition."""
