"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: budget problems exit with 3, I/O with 4,
and every other contract violation with 2.
"""


class DqiError(Exception):
    """Base class for library errors."""


class ContractViolation(DqiError, ValueError):
    """An input broke a documented precondition."""


class NotPrime(ContractViolation):
    pass


class DivisionByZero(DqiError, ZeroDivisionError):
    pass


class LengthMismatch(ContractViolation):
    pass


class OrderNotPrime(ContractViolation):
    pass


class FieldMismatch(ContractViolation):
    pass


class ZeroPolynomial(DivisionByZero):
    """Raised when an operation needs a nonzero polynomial (reciprocal, divisor)."""


class DegreeContract(ContractViolation):
    pass


class WeightContractViolated(ContractViolation):
    """The decoder was fed a syndrome whose error weight exceeds the radius."""


class DegenerateSet(ContractViolation):
    pass


class NotBalanced(ContractViolation):
    pass


class ShapeMismatch(ContractViolation):
    pass


class InvalidProfile(ContractViolation):
    pass


class DuplicateNode(ContractViolation):
    pass


class DomainError(ContractViolation):
    pass


class NormViolation(ContractViolation):
    pass


class InvalidWeights(ContractViolation):
    pass


class SyndromeCollision(DqiError):
    """Two low-weight errors share a syndrome; the decoding radius is too large."""


class BudgetExceeded(DqiError):
    def __init__(self, what, needed, budget):
        super().__init__(f"{what}: need {needed}, budget is {budget}")
        self.what = what
        self.needed = needed
        self.budget = budget


class RegimeViolation(DqiError):
    """Parameters fall outside the range where an analytic bound is proved.

    ``conditions`` maps each failed condition to a short description.
    """

    def __init__(self, message, conditions=None):
        super().__init__(message)
        self.conditions = dict(conditions or {})
