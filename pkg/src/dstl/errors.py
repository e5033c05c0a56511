"""Exception types shared across the package."""


class InputError(ValueError):
    """Invalid user input: malformed files, inconsistent shapes, bad options."""


class NumericError(RuntimeError):
    """A numerical routine failed to produce a trustworthy result."""
