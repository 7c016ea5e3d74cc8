"""Exception types shared across the package."""


class BranchDualError(Exception):
    """Base class for all errors raised by this package."""


class InfiniteCodimension(BranchDualError):
    """The generators span a subalgebra of infinite codimension in k[[t]].

    Detected when the discovered value set stabilizes with gcd > 1.
    """

    def __init__(self, gcd, values):
        self.gcd = gcd
        self.values = tuple(values)
        super().__init__(
            f"value set stabilized with gcd {gcd}: codimension is infinite"
        )


class PrecisionExhausted(BranchDualError):
    """A computation needs more series precision than is available.

    ``required`` is the minimum truncation order that would let the
    computation proceed.
    """

    def __init__(self, required, message=None):
        self.required = required
        super().__init__(
            message or f"insufficient series precision: need truncation >= {required}"
        )


class NotAlgebraForming(BranchDualError):
    """The given operator space fails the algebra-forming condition.

    Carries the failure certificate (with its witness series).
    """

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__("operator space is not algebra-forming")


class NonCoprime(BranchDualError):
    """Semigroup generators with gcd > 1 define no numerical semigroup."""


class ExpressionError(BranchDualError):
    """Malformed expression text; ``position`` points at the offending token."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InternalError(BranchDualError):
    """An internal consistency check failed; indicates a bug upstream."""
