"""Exception hierarchy shared across the package."""


class ChaosEdgeError(Exception):
    """Base class for errors raised by this package."""


class DescriptorError(ChaosEdgeError, ValueError):
    """A map or path descriptor failed to parse or validate."""


class PreconditionError(ChaosEdgeError, ValueError):
    """An operation was called outside its stated preconditions."""


class BudgetExhausted(ChaosEdgeError, RuntimeError):
    """An iteration/piece/orbit budget ran out before a decision was reached."""


class MarkovBudgetError(BudgetExhausted):
    """A plateau or breakpoint orbit did not close up within the budget ("not Markov at budget")."""


class DomainEscapeError(ChaosEdgeError, ValueError):
    """An orbit left the map's domain (only possible for maps that are not self-maps)."""


class BracketError(ChaosEdgeError, RuntimeError):
    """A parameter search could not bracket a sign change."""
