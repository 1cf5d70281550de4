"""Exception hierarchy shared by the solver, verifier, oracle and CLI."""


class DomainError(ValueError):
    """An agent or good id is out of range, or bundles overlap."""


class InvalidInstanceError(ValueError):
    """The instance violates the (2, inf)-bounded format or has m < n."""


class MalformedInputError(ValueError):
    """A file could not be parsed into an instance, allocation or trace."""


class GenerationError(ValueError):
    """The generator configuration cannot produce a valid instance."""


class BudgetExceededError(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


class EngineBugError(RuntimeError):
    """An invariant that the algorithm guarantees was observed to fail.

    ``event`` carries the offending RuleEvent when one is available and
    ``verdict`` the failing check.
    """

    def __init__(self, message, event=None, verdict=None):
        super().__init__(message)
        self.event = event
        self.verdict = verdict


class StructureError(EngineBugError):
    """The positive-weight envy graph is not a disjoint union of cycles."""


class NonTerminationError(EngineBugError):
    """The engine hit its iteration cap."""


class TheoremViolationError(RuntimeError):
    """No EFX completion of a two-agent partial allocation was found."""
