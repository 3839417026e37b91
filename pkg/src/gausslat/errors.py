"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input object violates one of its documented invariants."""


class EnumerationLimitError(RuntimeError):
    """A requested exact enumeration exceeds the configured resource bound."""


class InternalCheckError(AssertionError):
    """A consistency identity that must hold by construction failed.

    Raised instead of silently returning wrong data; signals a bug in the
    caller or in this library, never a bad user input.
    """
