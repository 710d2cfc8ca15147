"""Exception hierarchy; the CLI maps each family to an exit status."""


class MilnorError(Exception):
    """Base class for every error raised by this package."""


class BraidParseError(MilnorError, ValueError):
    """Malformed braid text.  ``position`` is the offending character offset."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class PreconditionError(MilnorError, ValueError):
    """Input is well formed but violates an operation's precondition."""


class NonPureBraidError(PreconditionError):
    pass


class DegreeOverflowError(PreconditionError):
    """A coefficient was requested beyond the series' trustworthy degree."""


class TheoremInapplicableError(PreconditionError):
    """Hypothesis of a link-level criterion fails for some sequence."""

    def __init__(self, message: str, sequence: tuple[int, ...]):
        super().__init__(message)
        self.sequence = sequence


class InconsistencyError(MilnorError, RuntimeError):
    """Internal cross-check failed (e.g. a non-unimodular generator matrix)."""
