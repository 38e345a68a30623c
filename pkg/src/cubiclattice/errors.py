"""Exception hierarchy shared by all modules."""


class CubicLatticeError(Exception):
    pass


class DomainError(CubicLatticeError, ValueError):
    """Arguments fall outside the range where an operation is defined.

    Raised e.g. by the closed-form count for k > a and by the piecewise
    floor tables for a < 34.
    """


class BudgetExceeded(CubicLatticeError):
    pass


class RefinementError(CubicLatticeError, ArithmeticError):
    """Exact refinement hit a state that irreducibility of f_a forbids.

    Either a bisection midpoint was an exact root or the iteration cap was
    reached for an element that should have separated from zero. Both mean
    a bug, never a legitimate input.
    """
