"""Exception hierarchy shared by all modules.

Every domain error derives from UltrashortError so the CLI can map any of
them to exit code 1 and print the error name on stderr.
"""


class UltrashortError(Exception):
    """Base class for all domain errors raised by this package."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NonPrimeModulus(UltrashortError):
    """A modulus expected to be prime is not."""


class RamifiedPrime(UltrashortError):
    """The prime divides the discriminant of the polynomial."""


class NotSplit(UltrashortError):
    """The polynomial does not split into d distinct linear factors mod q."""


class PrecisionExhausted(UltrashortError):
    """A certified decision could not be reached below the precision cap."""


class ZeroRootWithNegativeExponent(UltrashortError):
    """A Laurent polynomial with negative exponents was evaluated at 0."""


class VanishingValue(UltrashortError):
    """v(x) = 0 at a root where a nonzero value is required."""


class NonInvertibleRoot(UltrashortError):
    """A root is not invertible modulo q^n but a negative power is needed."""


class ZeroRoot(UltrashortError):
    """0 is a root (complex or modular) where the sum family forbids it."""


class OutOfRangeParameter(UltrashortError):
    """A numeric parameter is outside the supported range."""


class InvalidDescriptor(UltrashortError):
    """A condition-set descriptor is malformed or inconsistent with q, n."""


class InvalidPairing(UltrashortError):
    """A root pairing is not a valid involution of the index set."""


class TooLarge(UltrashortError):
    """The requested exact enumeration exceeds the size cap."""
