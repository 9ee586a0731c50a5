"""Exception hierarchy shared by every primeset module.

Each leaf class maps to one CLI exit code (see ``primeset.cli``).
"""

from __future__ import annotations


class PrimesetError(Exception):
    """Base class for all library errors."""


class InvalidMultiplicityError(PrimesetError, ValueError):
    """A multiplicity was zero, negative, or above the configured limit."""


class UnknownIdError(PrimesetError, LookupError):
    """An element id was not assigned by the codebook in use."""


class UnknownSymbolError(PrimesetError, LookupError):
    """A raw symbol has not been interned and interning was not allowed."""


class NotPrimeError(PrimesetError, ValueError):
    """``beta_inverse`` was asked about a number that is not prime."""


class UnassignedPrimeError(PrimesetError, LookupError):
    """A prime that no element id has been mapped to (yet)."""


class ResourceLimitError(PrimesetError):
    """A configured resource cap (sieve bound, bit-length cap) was hit."""


class ParseError(PrimesetError, ValueError):
    """Malformed text input. ``line`` is 1-based, or None if not line-specific."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class VersionMismatchError(ParseError):
    """Codebook file written by an incompatible format version."""


class NodeRangeError(ParseError):
    """Graph file referenced a node index outside ``[0, n)``."""


class UnknownFactorError(PrimesetError, ValueError):
    """An exact code has a prime factor outside the codebook."""

    def __init__(self, residual: int):
        self.residual = residual
        super().__init__(f"code has factor(s) outside the codebook: residual {residual}")


class UnknownCodeError(PrimesetError, LookupError):
    """``apply_phi`` got a code that is not in its table."""


class DuplicateMultisetError(PrimesetError, ValueError):
    """The same multiset was listed twice when building a phi table."""


class InvariantViolation(PrimesetError, AssertionError):
    """A mathematical invariant failed. Never expected to fire."""


class PrecisionEscalationError(PrimesetError):
    """Certification did not succeed below the precision cap."""


class MixedEpsilonError(PrimesetError, ValueError):
    """Pair codes built with different epsilon values were compared."""
