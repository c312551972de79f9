"""Exception hierarchy. Each class carries the CLI exit code it maps to."""


class BregmanError(Exception):
    exit_code = 1


class UsageError(BregmanError, ValueError):
    """Bad arguments: empty sets, dimension mismatch, exceeded budgets."""

    exit_code = 2


class ParseError(BregmanError, ValueError):
    """Malformed input file."""

    exit_code = 3


class DomainError(BregmanError, ValueError):
    """Points outside the generator domain, or failed point-cloud validation."""

    exit_code = 4


class ConvergenceError(BregmanError, RuntimeError):
    """Bisection failed to reach the requested tolerance."""

    exit_code = 5

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap
