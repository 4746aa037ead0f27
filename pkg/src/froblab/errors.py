"""Exception types shared across the laboratory modules."""


class FroblabError(Exception):
    """Base class for all errors raised by this package."""


class CompositeCharacteristic(FroblabError):
    """The requested characteristic is not a prime number."""


class DegreeZero(FroblabError):
    """An extension degree below 1 was requested."""


class EvenCharacteristic(FroblabError):
    """Characteristic 2 is outside the supported range."""


class ZeroArgument(FroblabError):
    """A nonzero field element was required."""


class BudgetExceeded(FroblabError):
    """A direct enumeration would exceed the configured work budget."""


class ZeroPolynomial(FroblabError):
    """The zero polynomial is not a valid input here."""


class NotMonic(FroblabError):
    """A monic polynomial was required."""


class OddTruncation(FroblabError):
    """The norm-one circle group requires an even truncation order."""


class ZeroConstantTerm(FroblabError):
    """The operation requires a polynomial with nonzero constant term."""


class TrivialCharacter(FroblabError):
    """The trivial character has no L-polynomial."""


class TailNotVanishing(FroblabError):
    """Coefficients beyond the claimed degree did not vanish; upstream bug."""


class RootFindFailure(FroblabError):
    """Simultaneous root iteration failed to converge."""


class RHViolation(FroblabError):
    """A computed inverse root strayed from the critical circle."""


class DegenerateNewton(FroblabError):
    """Newton's identities hit a division by zero index."""


class OddSymplecticRank(FroblabError):
    """Symplectic symmetry requires an even rank."""


class ScaleOverflow(FroblabError):
    """The relation-search scale exceeds the exact integer range."""


class DimensionMismatch(FroblabError):
    """Relation lattices live in different ambient dimensions."""


class LengthMismatch(FroblabError):
    """Race series must have equal length."""


class DegreeMismatch(FroblabError):
    """Polynomial degree does not match the declared rank."""


class UnsupportedHaarRank(FroblabError):
    """Haar sampling is implemented for rank 2 only."""


class DomainError(FroblabError):
    """A constant was requested outside its formula's domain."""


class ConfigError(FroblabError):
    """A run configuration failed validation."""
