"""Exception types shared across the toolkit."""


class ZdimError(Exception):
    """Base class for all toolkit errors."""


class RangeError(ZdimError):
    """Invalid range endpoints (e.g. a > b)."""


class BudgetExceededError(ZdimError):
    """An enumeration ran past its element budget.

    Carries the partial result accumulated before the budget was hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ParseError(ZdimError):
    """Malformed set file.  ``line`` is the 1-based offending line number."""

    def __init__(self, message, line):
        super().__init__(f"line {line}: {message}")
        self.line = line


class CodeSpecError(ZdimError):
    """Invalid instantaneous-code specification; lists all violations."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)


class RuleError(ZdimError):
    """Invalid substitution rule."""


class ParameterError(ZdimError):
    """Parameters outside their documented domain."""


class ConstructionError(ZdimError):
    """A betting-function construction is infeasible for the given s."""


class DepthError(ZdimError):
    """A query exceeds the finite depth of a betting-function table."""


class UsageError(ZdimError):
    """Incompatible arguments (maps to CLI exit code 2)."""
