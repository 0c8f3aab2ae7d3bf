"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class LambdaError(Exception):
    """Base class for all errors raised by this package."""


class NonIntegerValue(LambdaError):
    """A polynomial was asked for an integer value where it takes a fraction."""


class NotEventuallyPositive(LambdaError):
    """The polynomial's leading coefficient is not positive."""


class BudgetExceeded(LambdaError):
    """A count table would not fit in the configured resources.

    ``required_k`` is the table length (largest index) that was asked for and
    ``required_bytes`` the estimated memory it needs.
    """

    def __init__(self, required_k: int, required_bytes: int, budget: int, detail: str = ""):
        self.required_k = required_k
        self.required_bytes = required_bytes
        self.budget = budget
        msg = (
            f"required table size K={required_k} entries "
            f"(~{required_bytes} bytes) exceeds budget of {budget} bytes"
        )
        if detail:
            msg = f"{msg}; {detail}"
        super().__init__(msg)


class TableTooShort(LambdaError):
    """A base-case range reaches past the end of the count table."""


class NotComplete(LambdaError):
    """The polynomial sequence fails the completeness check."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.failures) or "sequence is not complete")


class UnverifiedCertificate(LambdaError):
    """A certificate that has not passed verification was about to be rendered."""


class LimitExceeded(LambdaError):
    """The brute-force oracle hit one of its size or time limits."""
