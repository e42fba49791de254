"""Exception hierarchy.

Precondition failures and non-generic input map to CLI exit code 2;
unsupported inputs and exceeded instance limits map to exit code 3.
"""


class TropicalError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(TropicalError, ValueError):
    """An input violates a documented precondition."""


class Unbalanced(PreconditionError):
    pass


class ProfileMismatch(PreconditionError):
    """The marking profile does not satisfy sum (k+1) n_k = |degree| - 1."""


class OddShape(PreconditionError):
    """A refined value has odd z-exponents or an odd denominator power."""


class Asymmetric(PreconditionError):
    """A y-numerator is not invariant under y -> 1/y."""


class UnmarkedMultivalent(PreconditionError):
    """Refined weights are only defined for unmarked vertices of valency 3."""


class NonGeneric(TropicalError):
    """A point configuration or order functional is not generic."""


class Unsupported(TropicalError):
    pass


class LimitExceeded(TropicalError):
    pass
