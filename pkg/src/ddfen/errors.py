"""Exception hierarchy shared by the library and the command line tool.

The split mirrors the CLI exit codes: input problems (2), numerical
failures (3), and violated internal invariants (4).
"""


class DdfenError(Exception):
    """Base class for every error raised by this package."""


class InputError(DdfenError, ValueError):
    """Malformed or inconsistent caller-supplied data or options."""


class NumericalError(DdfenError, ArithmeticError):
    """A computation left its valid domain (zero variance, singular
    transform, non-convergence, out-of-range coefficient, ...)."""


class InvariantError(DdfenError):
    """An internal consistency check failed; indicates a bug, not bad input."""
