"""Classical sequences and polynomials.

Eulerian numbers and polynomials, Chebyshev polynomials of the second kind
evaluated at a half-argument (integer coefficients in s), Stirling numbers,
weak compositions, and the coefficients of powers of x^2*cot(x).
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .algebra import QPolynomial, SPolynomial
from .errors import ResidueTooLarge, TCoeffMismatch


@lru_cache(maxsize=None)
def eulerian_row(n: int) -> tuple[int, ...]:
    """Row n of the Eulerian triangle: entry k counts permutations of length
    n with exactly k ascents."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        return (1,)
    prev = eulerian_row(n - 1)
    row = []
    for k in range(max(n, 1)):
        a = (k + 1) * prev[k] if k < len(prev) else 0
        b = (n - k) * prev[k - 1] if 1 <= k <= len(prev) else 0
        row.append(a + b)
    while len(row) > 1 and row[-1] == 0:
        row.pop()
    return tuple(row)


def eulerian_number(n: int, k: int) -> int:
    row = eulerian_row(n)
    return row[k] if 0 <= k < len(row) else 0


def eulerian_poly(n: int) -> QPolynomial:
    """The n-th Eulerian polynomial."""
    return QPolynomial(eulerian_row(n))


def eulerian_table(nmax: int) -> tuple[tuple[int, ...], ...]:
    """Rows 0..nmax of the Eulerian triangle."""
    return tuple(eulerian_row(n) for n in range(nmax + 1))


@lru_cache(maxsize=None)
def chebyshev_v(n: int) -> SPolynomial:
    """U_n evaluated at s/2, as an integer polynomial in s.

    Satisfies V(-2) = -1, V(-1) = 0 and V(n) = s*V(n-1) - V(n-2); V(n) has
    degree n and only powers of the same parity as n.
    """
    if n < -2:
        raise ValueError("n must be >= -2")
    if n == -2:
        return SPolynomial((-1,))
    if n == -1:
        return SPolynomial(())
    return SPolynomial.gen() * chebyshev_v(n - 1) - chebyshev_v(n - 2)


def chebyshev_closed_eval(n: int, t: float, tol: float = 1e-9) -> float:
    """U_n(t) through the two-root closed form, with complex intermediates.

    ((t+r)^(n+1) - (t-r)^(n+1)) / (2r) with r = sqrt(t^2-1); for |t| < 1 the
    root is imaginary and the imaginary residue of the result must stay
    below ``tol``.
    """
    if n < -2:
        raise ValueError("n must be >= -2")
    disc = t * t - 1.0
    if abs(disc) < 1e-12:
        # Both roots collide at t = +-1; use the limit U_n(+-1) = (+-1)^n (n+1).
        return float(n + 1) if t > 0 else (-1.0) ** n * (n + 1)
    r = cmath.sqrt(complex(disc))
    value = ((t + r) ** (n + 1) - (t - r) ** (n + 1)) / (2 * r)
    if abs(value.imag) > tol:
        raise ResidueTooLarge(f"imaginary residue {value.imag} at n={n}, t={t}")
    return value.real


@lru_cache(maxsize=None)
def stirling_first_unsigned(n: int, k: int) -> int:
    """Number of permutations of length n with exactly k cycles."""
    if n < 0 or k < 0 or k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return stirling_first_unsigned(n - 1, k - 1) + (n - 1) * stirling_first_unsigned(n - 1, k)


def stirling_first_signed(n: int, k: int) -> int:
    c = stirling_first_unsigned(n, k)
    return c if (n - k) % 2 == 0 else -c


@lru_cache(maxsize=None)
def stirling_second(n: int, k: int) -> int:
    """Number of partitions of an n-set into k nonempty blocks."""
    if n < 0 or k < 0 or k > n:
        return 0
    if n == 0:
        return 1 if k == 0 else 0
    return stirling_second(n - 1, k - 1) + k * stirling_second(n - 1, k)


_STIRLING_KINDS = {
    "first_signless": stirling_first_unsigned,
    "first_signed": stirling_first_signed,
    "second": stirling_second,
}


def stirling(kind: str, n: int, k: int) -> int:
    try:
        fn = _STIRLING_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown Stirling kind {kind!r}") from None
    return fn(n, k)


def binom(a: int, b: int) -> int:
    """Binomial coefficient with the zero convention: 0 whenever b < 0,
    b > a, or a < 0."""
    if b < 0 or a < 0 or b > a:
        return 0
    return math.comb(a, b)


# ---------------------------------------------------------------------------
# Coefficients of (x^2 cot x)^m

def _mul_trunc(a: tuple[Fraction, ...], b: tuple[Fraction, ...], order: int):
    out = [Fraction(0)] * (order + 1)
    for i, ca in enumerate(a[: order + 1]):
        if ca:
            for j, cb in enumerate(b[: order + 1 - i]):
                if cb:
                    out[i + j] += ca * cb
    return tuple(out)


def _recip_trunc(a: tuple[Fraction, ...], order: int):
    # Standard series inversion; a[0] must be nonzero.
    inv0 = 1 / a[0]
    out = [inv0] + [Fraction(0)] * order
    for m in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, m + 1):
            ai = a[i] if i < len(a) else Fraction(0)
            if ai:
                acc += ai * out[m - i]
        out[m] = -inv0 * acc
    return tuple(out)


@lru_cache(maxsize=None)
def _x2cot_series(order: int) -> tuple[Fraction, ...]:
    """Taylor coefficients of x^2 * cot(x) up to x^order (exact)."""
    cos = tuple(
        Fraction((-1) ** (k // 2), math.factorial(k)) if k % 2 == 0 else Fraction(0)
        for k in range(order + 1)
    )
    sinc = tuple(
        Fraction((-1) ** (k // 2), math.factorial(k + 1)) if k % 2 == 0 else Fraction(0)
        for k in range(order + 1)
    )
    ratio = _mul_trunc(cos, _recip_trunc(sinc, order), order)
    return (Fraction(0),) + ratio[:order]


@lru_cache(maxsize=None)
def _x2cot_power(m: int, order: int) -> tuple[Fraction, ...]:
    if m == 1:
        return _x2cot_series(order)
    return _mul_trunc(_x2cot_power(m - 1, order), _x2cot_series(order), order)


def _t_oracle(n: int, m: int) -> Fraction:
    return _x2cot_power(m, n)[n]


def _t_closed(n: int, m: int) -> Fraction:
    """Double sum over Stirling numbers for the x^n coefficient of
    (x^2 cot x)^m; zero by parity when n - m is odd.

    The inner indices run over the natural support (nonnegative factorial
    arguments); signed Stirling numbers of the first kind are used.
    """
    if (n - m) % 2 != 0:
        return Fraction(0)
    total = Fraction(0)
    for ell in range(max(0, 2 * m - n), m + 1):
        base = n - 2 * m + ell
        for k in range(0, base + 1):
            s1 = stirling_first_signed(ell + k, ell)
            s2 = stirling_second(base, k)
            if s1 == 0 or s2 == 0:
                continue
            total += Fraction(
                2**ell * math.factorial(k) * s1 * s2,
                math.factorial(m - ell) * math.factorial(ell + k) * math.factorial(base),
            )
    sign = -1 if ((n - m) // 2) % 2 else 1
    return Fraction(2) ** (n - 2 * m) * sign * math.factorial(m) * total


def t_coeff(n: int, m: int) -> Fraction:
    """The x^n coefficient of (x^2 cot x)^m, computed two independent ways.

    Always evaluates both the Stirling double sum and the exact series
    (cos/sin with rational arithmetic, raised to the m-th power); they must
    agree exactly or TCoeffMismatch is raised.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    if n < m:
        raise ValueError(f"series starts at x^{m}; n={n} too small")
    oracle = _t_oracle(n, m)
    closed = _t_closed(n, m)
    if closed != oracle:
        raise TCoeffMismatch(n, m, closed, oracle)
    return oracle


def weak_compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All sequences of ``parts`` nonnegative integers with the given sum."""
    if parts < 1:
        raise ValueError("parts must be >= 1")
    if total < 0:
        return
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        prev = -1
        comp = []
        for c in cuts:
            comp.append(c - prev - 1)
            prev = c
        comp.append(total + parts - 2 - prev)
        yield tuple(comp)
