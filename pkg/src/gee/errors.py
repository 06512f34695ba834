"""Exception types shared across the package."""


class GeeError(Exception):
    """Base class for every error this package raises on bad input."""


class ParseError(GeeError):
    """A text input (edge list or label file) could not be parsed."""


class FormatError(GeeError):
    """A binary file is not a valid graph cache or embedding file."""


class ValidationError(GeeError):
    """Input values violate an operation's contract."""
