"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where an operation is defined."""


class BudgetExceeded(RuntimeError):
    """An exhaustive computation would exceed a configured budget.

    Budgets are never enforced by silently truncating work; callers get this
    error instead, carrying the name of the violated budget, the amount of
    work the instance requires and the configured limit.
    """

    def __init__(self, budget, required, limit, detail=""):
        self.budget = budget
        self.required = required
        self.limit = limit
        msg = f"{budget} budget exceeded: required {required}, limit {limit}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class CertificationError(RuntimeError):
    """A construction produced an object that failed its own certificate."""


class InfeasibleInstance(BudgetExceeded):
    """A full-fidelity construction is out of reach at this size.

    Raised instead of silently approximating; the message states which part
    of the construction is too large.
    """
