"""Exception types shared across the package."""


class NIDFError(Exception):
    """Base class for all errors raised by nidf."""


class InputError(NIDFError, ValueError):
    """Malformed or inconsistent user input (bad file, bad shape, bad parameter)."""


class NumericError(NIDFError, ArithmeticError):
    """A numerical routine failed (degenerate graph, eigen-solver failure)."""
