"""Exception hierarchy shared by all modules.

Exit-code mapping used by the CLI: InputError -> 2, CertificateFailure -> 1,
NumericalError -> 3.
"""


class MixedMilnorError(Exception):
    """Base class for all package errors."""


class InputError(MixedMilnorError):
    """Malformed or out-of-contract input (bad dimensions, bad spec, ...)."""


class PreconditionError(InputError):
    """A documented operation precondition was violated."""


class CertificateFailure(MixedMilnorError):
    """A property / certificate check did not meet its tolerance."""


class NumericalError(MixedMilnorError):
    """Internal numerical failure (no convergence, singular system, ...)."""
