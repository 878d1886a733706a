"""Exception types raised by the library."""


class BarspecError(Exception):
    """Base class for all library errors."""


class InputError(BarspecError):
    """Malformed or inconsistent input data."""


class InvalidComplex(InputError):
    """A filtered or cell complex violates its structural invariants."""


class IncompatibleMap(InputError):
    """A chain map does not commute with the differentials or breaks grades."""


class NotCauchy(InputError):
    """A consecutive pair of a declared Cauchy sequence fails its bound."""


class LengthMismatch(InputError):
    """Telescope data lists have inconsistent lengths."""


class NotExact(InputError):
    """A sequence of module maps claimed exact is not."""


class ZeroClass(InputError):
    """The zero class has no spectral invariant."""


class EmptySpec(InputError):
    """A spectral norm was requested for a module with empty spectrum."""


class ActionUnavailable(InputError):
    """A ring action was requested but cannot be computed or was not supplied."""


class UnsupportedComplex(InputError):
    """The operation requires a simplicial complex."""


class CheckFailed(BarspecError):
    """A theorem-backed assertion did not hold on the given data."""


class CertificateInvalid(CheckFailed):
    """An interleaving certificate failed verification."""
