"""Exact polynomial and truncated-series arithmetic.

Four carriers:

- ``QPolynomial``: dense integer-coefficient polynomials in q.
- ``SPolynomial``: the same in a formal square root s with s^2 = theta = 1-q.
  A polynomial that is even in s reduces exactly to a QPolynomial.
- ``QVPolynomial``: polynomials in a catalytic variable v whose coefficients
  are QPolynomials (used by the bivariate descent recurrence).
- ``QSeries``: power series in x truncated at a fixed order, with each
  coefficient an exact rational multiple of a QPolynomial.

Coefficients are Python ints, so nothing overflows; canonical form strips
trailing zeros so equality is structural.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import NotDivisible, NotInvertible, OddPowerResidue


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    out = list(coeffs)
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


class _DensePoly:
    """Shared dense representation; subclasses fix the variable name."""

    VAR = "x"
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] | int = ()):
        if isinstance(coeffs, int):
            coeffs = (coeffs,)
        self.coeffs = _strip(coeffs)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def one(cls):
        return cls((1,))

    @classmethod
    def const(cls, c: int):
        return cls((c,))

    @classmethod
    def gen(cls):
        """The variable itself as a polynomial."""
        return cls((0, 1))

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.coeffs == _strip((other,))
        if type(other) is type(self):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((type(self).__name__, self.coeffs))

    def _coerce(self, other):
        if isinstance(other, int):
            return type(self)((other,))
        if type(other) is type(self):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return type(self)(out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return type(self)(())
        out = [0] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return type(self)(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = type(self).one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; works for int, Fraction, float, complex."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self):
        return type(self)(tuple(i * c for i, c in enumerate(self.coeffs) if i >= 1))

    def shift(self, k: int):
        """Multiply by the variable to the k-th power."""
        if not self.coeffs:
            return self
        return type(self)((0,) * k + self.coeffs)

    def compose(self, other):
        """Substitute ``other`` for the variable."""
        acc = type(self).zero()
        for c in reversed(self.coeffs):
            acc = acc * other + type(self).const(c)
        return acc

    def content(self) -> int:
        return math.gcd(*(abs(c) for c in self.coeffs)) if self.coeffs else 0

    def divexact(self, other):
        """Exact polynomial division; NotDivisible on a nonzero remainder."""
        other = self._coerce(other)
        if other is None or other.is_zero():
            raise NotDivisible("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree
        lead = other.coeffs[-1]
        out = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            if c % lead:
                raise NotDivisible(f"{self} not divisible by {other}")
            f = c // lead
            out[i - d] = f
            for j, oc in enumerate(other.coeffs):
                rem[i - d + j] -= f * oc
        if any(rem):
            raise NotDivisible(f"{self} not divisible by {other}")
        return type(self)(out)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                term = str(abs(c))
            else:
                var = self.VAR if i == 1 else f"{self.VAR}^{i}"
                term = var if abs(c) == 1 else f"{abs(c)}*{var}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.coeffs!r})"


class QPolynomial(_DensePoly):
    """Integer-coefficient polynomial in q."""

    VAR = "q"
    __slots__ = ()

    def div_q(self) -> "QPolynomial":
        """Exact division by q; requires a vanishing constant term."""
        if not self.coeffs:
            return self
        if self.coeffs[0] != 0:
            raise NotDivisible(f"constant term {self.coeffs[0]} != 0")
        return QPolynomial(self.coeffs[1:])

    def substitute_theta(self) -> "QPolynomial":
        """Read the coefficients as powers of theta = 1-q and expand in q."""
        return self.compose(QPolynomial((1, -1)))

    def reverse(self, degree: int) -> "QPolynomial":
        """Coefficient reversal q^degree * p(1/q); requires deg p <= degree."""
        if self.degree > degree:
            raise ValueError(f"degree {self.degree} exceeds reversal degree {degree}")
        out = [0] * (degree + 1)
        for i, c in enumerate(self.coeffs):
            out[degree - i] = c
        return QPolynomial(out)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    def to_json_obj(self) -> dict:
        # Coefficients as decimal strings: arbitrary precision survives any
        # JSON consumer.
        return {"var": "q", "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "QPolynomial":
        if obj.get("var") != "q":
            raise ValueError(f"expected var 'q', got {obj.get('var')!r}")
        return cls(tuple(int(c) for c in obj["coeffs"]))

    @classmethod
    def from_json(cls, text: str) -> "QPolynomial":
        return cls.from_json_obj(json.loads(text))


#: theta = 1 - q
THETA = QPolynomial((1, -1))
#: the variable q
Q = QPolynomial((0, 1))


class SPolynomial(_DensePoly):
    """Integer-coefficient polynomial in s, where s^2 = theta = 1-q."""

    VAR = "s"
    __slots__ = ()

    def reduce_even(self) -> QPolynomial:
        """Map s^(2k) -> theta^k -> polynomial in q.

        Raises OddPowerResidue if any odd-power coefficient is nonzero,
        which would mean the expression does not live in the q ring.
        """
        for i in range(1, len(self.coeffs), 2):
            if self.coeffs[i]:
                raise OddPowerResidue(i)
        return QPolynomial(self.coeffs[0::2]).substitute_theta()


class QVPolynomial:
    """Polynomial in v with QPolynomial coefficients."""

    __slots__ = ("vcoeffs",)

    def __init__(self, vcoeffs: Sequence[QPolynomial] = ()):
        out = list(vcoeffs)
        while out and out[-1].is_zero():
            out.pop()
        self.vcoeffs = tuple(out)

    @classmethod
    def zero(cls):
        return cls(())

    @classmethod
    def const(cls, p: QPolynomial | int):
        if isinstance(p, int):
            p = QPolynomial((p,))
        return cls((p,))

    @classmethod
    def monomial(cls, j: int, p: QPolynomial | int = 1):
        if isinstance(p, int):
            p = QPolynomial((p,))
        return cls((QPolynomial.zero(),) * j + (p,))

    @classmethod
    def geometric(cls, m: int):
        """1 + v + ... + v^(m-1), the closed form of (1-v^m)/(1-v)."""
        return cls((QPolynomial.one(),) * m)

    @property
    def vdegree(self) -> int:
        return len(self.vcoeffs) - 1

    def vcoefficient(self, j: int) -> QPolynomial:
        return self.vcoeffs[j] if 0 <= j < len(self.vcoeffs) else QPolynomial.zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, QVPolynomial):
            return self.vcoeffs == other.vcoeffs
        return NotImplemented

    def __hash__(self):
        return hash(("QV", self.vcoeffs))

    def _coerce(self, other):
        if isinstance(other, (int, QPolynomial)):
            return QVPolynomial.const(other)
        if isinstance(other, QVPolynomial):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.vcoeffs, other.vcoeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return QVPolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return QVPolynomial(tuple(-c for c in self.vcoeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.vcoeffs, other.vcoeffs
        if not a or not b:
            return QVPolynomial(())
        out = [QPolynomial.zero()] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca.is_zero():
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return QVPolynomial(out)

    __rmul__ = __mul__

    def shift_v(self, k: int) -> "QVPolynomial":
        """Multiply by v^k."""
        if not self.vcoeffs:
            return self
        return QVPolynomial((QPolynomial.zero(),) * k + self.vcoeffs)

    def eval_v1(self) -> QPolynomial:
        """Evaluate at v = 1."""
        acc = QPolynomial.zero()
        for c in self.vcoeffs:
            acc = acc + c
        return acc

    def div_one_minus_v(self) -> "QVPolynomial":
        """Exact division by (1 - v); requires the value at v = 1 to vanish."""
        # p = (1-v) * q  means  q_j = p_0 + ... + p_j; the final cumulative
        # sum is p(1), which must be zero for exactness.
        acc = QPolynomial.zero()
        out = []
        for c in self.vcoeffs:
            acc = acc + c
            out.append(acc)
        if out and not out[-1].is_zero():
            raise NotDivisible("polynomial is not divisible by (1 - v)")
        return QVPolynomial(out[:-1])

    def __str__(self) -> str:
        if not self.vcoeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.vcoeffs):
            if c.is_zero():
                continue
            v = "" if j == 0 else ("v" if j == 1 else f"v^{j}")
            parts.append(f"({c})" + (f"*{v}" if v else ""))
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"QVPolynomial({self.vcoeffs!r})"


@dataclass(frozen=True)
class QFrac:
    """An element of Q[q]: a QPolynomial numerator over a positive integer
    denominator, in lowest terms."""

    num: QPolynomial
    den: int

    def __post_init__(self):
        num, den = self.num, self.den
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = QPolynomial.zero(), 1
        else:
            if den < 0:
                num, den = -num, -den
            g = math.gcd(num.content(), den)
            if g > 1:
                num = QPolynomial(tuple(c // g for c in num.coeffs))
                den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def zero(cls):
        return cls(QPolynomial.zero(), 1)

    @classmethod
    def one(cls):
        return cls(QPolynomial.one(), 1)

    @classmethod
    def of(cls, num: QPolynomial | int, den: int = 1) -> "QFrac":
        if isinstance(num, int):
            num = QPolynomial((num,))
        return cls(num, den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other):
        if isinstance(other, (int, QPolynomial)):
            return QFrac.of(other)
        if isinstance(other, QFrac):
            return other
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QFrac(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return QFrac(-self.num, self.den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return QFrac(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def div_int(self, k: int) -> "QFrac":
        return QFrac(self.num, self.den * k)

    def as_polynomial(self) -> QPolynomial:
        """The underlying polynomial; requires denominator 1."""
        if self.den != 1:
            raise NotDivisible(f"coefficient {self} is not integral")
        return self.num

    def evaluate(self, q):
        """Numeric value at q (int, Fraction, float, complex)."""
        return self.num(q) / self.den

    def reciprocal(self) -> "QFrac":
        """1 / self; requires a nonzero rational constant."""
        if self.num.degree > 0 or self.num.is_zero():
            raise NotInvertible(f"{self} is not a nonzero rational constant")
        return QFrac(QPolynomial((self.den,)), self.num.coeffs[0])

    def __str__(self) -> str:
        return str(self.num) if self.den == 1 else f"({self.num})/{self.den}"


class QSeries:
    """Power series in x, truncated at a fixed order, over Q[q].

    ``coeffs[m]`` multiplies x^m.  Binary operations truncate to the smaller
    of the two orders.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[QFrac]):
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise ValueError("a series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def coefficient(self, m: int) -> QFrac:
        if not 0 <= m <= self.order:
            raise IndexError(f"coefficient {m} beyond truncation order {self.order}")
        return self.coeffs[m]

    @classmethod
    def from_callable(cls, fn: Callable[[int], QFrac], order: int) -> "QSeries":
        return cls(tuple(fn(m) for m in range(order + 1)))

    @classmethod
    def egf(cls, fn: Callable[[int], QPolynomial | QFrac | int], order: int) -> "QSeries":
        """Series with x^m coefficient fn(m) / m!."""

        def coeff(m: int) -> QFrac:
            v = fn(m)
            if not isinstance(v, QFrac):
                v = QFrac.of(v)
            return v.div_int(math.factorial(m))

        return cls.from_callable(coeff, order)

    @classmethod
    def constant(cls, c: "QPolynomial | QFrac | int", order: int) -> "QSeries":
        if not isinstance(c, QFrac):
            c = QFrac.of(c)
        return cls((c,) + (QFrac.zero(),) * order)

    @classmethod
    def x(cls, order: int) -> "QSeries":
        if order < 1:
            return cls((QFrac.zero(),) * (order + 1))
        return cls((QFrac.zero(), QFrac.one()) + (QFrac.zero(),) * (order - 1))

    def __eq__(self, other) -> bool:
        if isinstance(other, QSeries):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _binop_order(self, other) -> int:
        return min(self.order, other.order)

    def __add__(self, other):
        if isinstance(other, (int, QPolynomial, QFrac)):
            other = QSeries.constant(other, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        n = self._binop_order(other)
        return QSeries(tuple(self.coeffs[m] + other.coeffs[m] for m in range(n + 1)))

    __radd__ = __add__

    def __neg__(self):
        return QSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, QPolynomial, QFrac)):
            other = QSeries.constant(other, self.order)
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        if isinstance(other, (int, QPolynomial, QFrac)):
            c = other if isinstance(other, QFrac) else QFrac.of(other)
            return QSeries(tuple(x * c for x in self.coeffs))
        if not isinstance(other, QSeries):
            return NotImplemented
        n = self._binop_order(other)
        out = []
        for m in range(n + 1):
            acc = QFrac.zero()
            for i in range(m + 1):
                a = self.coeffs[i]
                b = other.coeffs[m - i]
                if not a.is_zero() and not b.is_zero():
                    acc = acc + a * b
            out.append(acc)
        return QSeries(out)

    __rmul__ = __mul__

    def square(self) -> "QSeries":
        return self * self

    def reciprocal(self) -> "QSeries":
        """Multiplicative inverse up to the truncation order.

        The constant coefficient must be a nonzero rational constant (a unit
        of Q[q]); anything else raises NotInvertible.
        """
        c0 = self.coeffs[0].reciprocal()
        out = [c0]
        for m in range(1, self.order + 1):
            acc = QFrac.zero()
            for i in range(1, m + 1):
                if not self.coeffs[i].is_zero():
                    acc = acc + self.coeffs[i] * out[m - i]
            out.append(-c0 * acc)
        return QSeries(out)

    def differentiate(self) -> "QSeries":
        """Formal d/dx; the order drops by one."""
        if self.order == 0:
            return QSeries((QFrac.zero(),))
        return QSeries(tuple(self.coeffs[m] * m for m in range(1, self.order + 1)))

    def integrate(self) -> "QSeries":
        """Formal integral from 0; the order rises by one."""
        out = [QFrac.zero()]
        for m, c in enumerate(self.coeffs):
            out.append(c.div_int(m + 1))
        return QSeries(out)

    def divexact_poly(self, p: QPolynomial) -> "QSeries":
        """Divide every coefficient exactly by the polynomial p."""
        return QSeries(tuple(QFrac(c.num.divexact(p), c.den) for c in self.coeffs))

    def evaluate(self, x, q):
        """Numeric value of the truncated series at (x, q)."""
        acc = 0.0
        xm = 1.0
        for c in self.coeffs:
            if not c.is_zero():
                acc += c.evaluate(q) * xm
            xm *= x
        return acc

    def __str__(self) -> str:
        parts = [f"({c})*x^{m}" for m, c in enumerate(self.coeffs) if not c.is_zero()]
        return " + ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"QSeries(order={self.order})"


def _qm1_power(n: int) -> QPolynomial:
    return QPolynomial((-1, 1)) ** n


def exp_qm1(order: int) -> QSeries:
    """exp((q-1)x): x^n coefficient (q-1)^n / n!."""
    return QSeries.egf(_qm1_power, order)


def eulerian_gf(order: int) -> QSeries:
    """(1-q) / (exp((q-1)x) - q), built via a reciprocal of a unit series.

    Dividing numerator and denominator by (1-q) gives the series
    1 - sum_{n>=1} (q-1)^(n-1) x^n / n!, whose constant term is 1.
    """

    def denom_coeff(n: int) -> QPolynomial:
        if n == 0:
            return QPolynomial.one()
        return -_qm1_power(n - 1)

    return QSeries.egf(denom_coeff, order).reciprocal()


def cosh_sx(order: int) -> QSeries:
    """cosh(s x) = sum theta^k x^(2k) / (2k)!."""
    return QSeries.egf(lambda n: THETA ** (n // 2) if n % 2 == 0 else 0, order)


def sinh_sx_over_s(order: int) -> QSeries:
    """sinh(s x)/s = sum theta^k x^(2k+1) / (2k+1)!."""
    return QSeries.egf(lambda n: THETA ** (n // 2) if n % 2 == 1 else 0, order)


def cosh_2sx(order: int) -> QSeries:
    """cosh(2 s x) = sum (4 theta)^k x^(2k) / (2k)!."""
    return QSeries.egf(
        lambda n: 4 ** (n // 2) * THETA ** (n // 2) if n % 2 == 0 else 0, order
    )


def theta_cosh_2sx(order: int) -> QSeries:
    """theta * cosh(2 s x)."""
    return cosh_2sx(order) * THETA


def s_sinh_2sx(order: int) -> QSeries:
    """s * sinh(2 s x) = sum 2^(2k+1) theta^(k+1) x^(2k+1) / (2k+1)!.

    Even in s, hence exact in theta.
    """
    return QSeries.egf(
        lambda n: 2**n * THETA ** ((n + 1) // 2) if n % 2 == 1 else 0, order
    )


_BUILDERS: dict[str, Callable[[int], QSeries]] = {
    "exp_qm1": exp_qm1,
    "eulerian": eulerian_gf,
    "cosh_sx": cosh_sx,
    "sinh_sx_over_s": sinh_sx_over_s,
    "cosh_2sx": cosh_2sx,
    "theta_cosh_2sx": theta_cosh_2sx,
    "s_sinh_2sx": s_sinh_2sx,
}


def qseries_builder(name: str, order: int) -> QSeries:
    """Named exact series constructors."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown series builder {name!r}") from None
    if order < 0:
        raise ValueError("order must be >= 0")
    return builder(order)
