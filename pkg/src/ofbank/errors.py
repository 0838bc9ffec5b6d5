"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the domain an operation is defined on."""


class InfeasibleConfigError(DomainError):
    """No synthesis length within the search cap satisfies the condition.

    Raised by the length functionals when the channel/subsampling
    configuration admits no finite solution (undersampled regimes) or the
    upward scan exceeds its safety cap.
    """


class SolverFailure(RuntimeError):
    """A numerical factorization did not converge.

    Deliberately distinct from an "infeasible" verdict: feasibility tests
    must never report solver breakdown as infeasibility.
    """
