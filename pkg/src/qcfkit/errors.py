"""Exception types shared across the toolkit."""


class AdmissibilityError(ValueError):
    """An order m (or family) fails a congruence/status precondition."""


class DivisionHazard(ArithmeticError):
    """A denominator is numerically too close to zero to trust a quotient;
    the gap is unbounded/indeterminate at this precision."""


class ZeroPartialNumeratorError(ValueError):
    """A partial numerator vanishes inside a period; the period transfer
    map degenerates."""


class AmbiguousClassificationError(ArithmeticError):
    """Boundary between elliptic and non-elliptic at this precision;
    raise precision and retry."""


class UnreliableNumericsError(ArithmeticError):
    """Two-precision runs disagree beyond tolerance."""


class CertificationError(ValueError):
    """A requested output cannot be certified from the available quotients."""


class QuotientMaterializationError(ValueError):
    """A partial quotient is an exponent tower too large to materialize."""
