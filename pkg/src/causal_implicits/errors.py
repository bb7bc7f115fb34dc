"""Exception types shared across the package."""


class CausalImplicitsError(Exception):
    """Base class for all package errors."""


class GraphError(CausalImplicitsError):
    """Structural problem with a causal graph (cycle, bad edge, duplicate name)."""


class GraphParseError(GraphError):
    """Malformed graph text; carries the offending line number."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)


class PreconditionError(CausalImplicitsError):
    """An operation's stated precondition does not hold for the given input."""


class BudgetExceededError(CausalImplicitsError):
    """A Groebner computation hit its resource budget.

    Raised instead of returning a truncated basis; carries what was exhausted.
    """

    def __init__(self, reason, pairs_processed=None, degree=None):
        self.reason = reason
        self.pairs_processed = pairs_processed
        self.degree = degree
        super().__init__(reason)


class MissingParameterError(CausalImplicitsError):
    """Evaluation needed a joint-space parameter no supplied table provides."""

    def __init__(self, param_text):
        self.param_text = param_text
        super().__init__(f"no table provides a value for {param_text}")
