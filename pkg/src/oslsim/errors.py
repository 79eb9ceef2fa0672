"""Shared exception types."""


class AdmissibilityError(ValueError):
    """An exponent field violates one of the admissibility conditions."""


class ContractError(ValueError):
    """Operation called outside its contract (e.g. symmetric-only statistic)."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested tolerance.

    Carries the best estimate and the achieved error bound.
    """

    def __init__(self, message, best=None, achieved=None):
        super().__init__(message)
        self.best = best
        self.achieved = achieved
