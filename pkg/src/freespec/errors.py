"""Exception types raised across the package."""


class FreespecError(ValueError):
    """Base class for all input and numerical-precondition failures."""


class ShapeError(FreespecError):
    pass


class NotHermitianError(FreespecError):
    def __init__(self, deviation, tolerance):
        super().__init__(
            f"matrix is not Hermitian: ||M - M*||_F = {deviation:.3e} > {tolerance:.3e}"
        )
        self.deviation = deviation
        self.tolerance = tolerance


class NotPositiveDefiniteError(FreespecError):
    def __init__(self, eigenvalue, what="matrix"):
        super().__init__(f"{what} is not positive definite (smallest eigenvalue {eigenvalue:.3e})")
        self.eigenvalue = eigenvalue


class SingularResolventError(FreespecError):
    def __init__(self, sigma_min):
        super().__init__(f"I - Lambda_A(X) is singular to working precision (sigma_min = {sigma_min:.3e})")
        self.sigma_min = sigma_min


class NotNilpotentError(FreespecError):
    pass


class HypothesisError(FreespecError):
    """The C1, C2 context does not satisfy the invertibility/generation hypotheses."""

    def __init__(self, report):
        failed = [k for k, v in report.items() if isinstance(v, bool) and not v]
        super().__init__(f"context fails hypotheses: {', '.join(failed)}")
        self.report = report
