"""Exception types shared across solver modules."""


class BudgetExceededError(RuntimeError):
    """A solver hit its node-expansion cap before deciding feasibility."""

    def __init__(self, budget: int):
        super().__init__(f"expansion budget of {budget} exhausted")
        self.budget = budget
