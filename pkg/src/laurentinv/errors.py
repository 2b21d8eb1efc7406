"""Exception hierarchy shared by the library and the command line front end."""


class LaurentInvError(Exception):
    """Base class for all errors raised by :mod:`laurentinv`."""


class InvalidInputError(LaurentInvError, ValueError):
    """Malformed or inconsistent input data (bad points, empty supports, ...)."""


class PreconditionError(LaurentInvError, ValueError):
    """The input is well formed but the requested quantity is not defined for it."""


class CapExceededError(LaurentInvError, RuntimeError):
    """A configured resource cap (subset enumeration, lattice points, ...) was hit."""


class InternalInvariantError(LaurentInvError, RuntimeError):
    """A mathematical invariant that must always hold was violated; indicates a bug."""
