"""Exception types shared across the package."""


class DomainError(Exception):
    """A mathematical precondition failed (invalid structure, not strong, out of class)."""


class FormatError(Exception):
    """A structure file or id list could not be parsed."""
