"""Exception types used across the package."""


class FlatstatError(Exception):
    """Base class for all library errors."""


class ParseError(FlatstatError, ValueError):
    """Input text does not match the word or cycle grammar."""


class InvalidPermutation(FlatstatError, ValueError):
    """A sequence is not a rearrangement of 1..n."""


class NonStandardOrder(ParseError):
    """Cycle input is valid but not in standard order (strict parsing)."""


class CapExceeded(FlatstatError, ValueError):
    """Requested enumeration size exceeds the configured cap."""


class InvalidPrefix(FlatstatError, ValueError):
    """Prefix constraint has repeated or out-of-range letters."""


class NotDivisible(FlatstatError, ArithmeticError):
    """Exact polynomial division has a nonzero remainder."""


class OddPowerResidue(FlatstatError, ArithmeticError):
    """A polynomial that should be even in s has an odd-power coefficient.

    Signals a transcribed identity that does not reduce to the theta ring.
    """

    def __init__(self, index: int):
        super().__init__(f"nonzero coefficient at odd power s^{index}")
        self.index = index


class NotInvertible(FlatstatError, ArithmeticError):
    """Series reciprocal requested but the constant term is not a unit."""


class TCoeffMismatch(FlatstatError, ArithmeticError):
    """The two independent evaluations of a cotangent-power coefficient differ."""

    def __init__(self, n: int, m: int, closed, oracle):
        super().__init__(
            f"t[{n},{m}]: closed sum {closed} != series oracle {oracle}"
        )
        self.n = n
        self.m = m


class ResidueTooLarge(FlatstatError, ArithmeticError):
    """Imaginary residue of a complex evaluation exceeds tolerance."""


class MethodUnsupported(FlatstatError, ValueError):
    """The requested computation method does not apply to this statistic."""


class RangeError(FlatstatError, ValueError):
    """Argument outside the stated domain of a formula."""


class InvalidEncoding(FlatstatError, ValueError):
    """An insertion encoding violates its defining constraints."""


class PoleProximity(FlatstatError, ArithmeticError):
    """Numeric evaluation requested too close to a pole."""


class QuadratureFailure(FlatstatError, ArithmeticError):
    """Adaptive quadrature did not reach the requested accuracy."""


class NoConvergence(FlatstatError, ArithmeticError):
    """Infinite-sum evaluation did not reach the certified tail bound."""
