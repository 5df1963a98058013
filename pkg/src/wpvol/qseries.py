"""Truncated formal power series over exact rational coefficients.

The scalar type throughout is ``fractions.Fraction``: every coefficient is
an exact rational in lowest terms and nothing is ever rounded.  A
:class:`Series` carries an explicit truncation order N; coefficients of
x^(N+1) and beyond are *unknown*, not zero, so binary operations truncate
conservatively to the smaller operand order and never pad with zeros.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional, Union

__all__ = [
    "Series",
    "bessel_x_of_y",
    "revert_lagrange",
    "factorial",
    "double_factorial",
    "format_rational",
    "parse_rational",
    "first_mismatch",
]

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^[+-]?\d+(?:/\d+)?$")


@lru_cache(maxsize=None)
def factorial(n: int) -> int:
    """n! as an exact integer, memoized."""
    if n < 0:
        raise ValueError(f"factorial of negative argument {n}")
    return math.factorial(n)


@lru_cache(maxsize=None)
def double_factorial(n: int) -> int:
    """n!! = n(n-2)(n-4)... with the conventions (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"double factorial of {n} is undefined here")
    if n <= 0:
        return 1
    return n * double_factorial(n - 2)


def _as_fraction(value: Scalar) -> Fraction:
    # floats are rejected everywhere: exactness is the whole point
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact rational required, got {type(value).__name__}")


def format_rational(value: Scalar) -> str:
    """Render p/q, omitting the denominator when it is 1."""
    q = _as_fraction(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q"; reject anything else (including q = 0)."""
    text = text.strip()
    if not _RATIONAL_RE.match(text):
        raise ValueError(f"malformed rational {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ValueError(f"malformed rational {text!r} (zero denominator)") from exc


def _mul_lists(a: list, b: list, n: int) -> list:
    """Cauchy product of coefficient lists, truncated at order n."""
    out = [_ZERO] * (n + 1)
    for i, ai in enumerate(a):
        if i > n:
            break
        if not ai:
            continue
        top = min(n - i, len(b) - 1)
        for j in range(top + 1):
            bj = b[j]
            if bj:
                out[i + j] += ai * bj
    return out


def _compose_lists(outer: list, inner: list, n: int) -> list:
    """Horner evaluation of outer at inner (inner[0] must vanish), order n."""
    res = [_ZERO] * (n + 1)
    for c in reversed(outer):
        res = _mul_lists(res, inner, n)
        res[0] += c
    return res


class Series:
    """A power series in x known exactly through the coefficient of x^order.

    Immutable; all operations return new instances, so values may be freely
    shared between threads.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Iterable[Scalar]):
        cs = tuple(_as_fraction(c) for c in coeffs)
        if not cs:
            raise ValueError("a series needs at least its constant coefficient")
        self._coeffs = cs

    @classmethod
    def constant(cls, value: Scalar, order: int = 0) -> "Series":
        if order < 0:
            raise ValueError("order must be >= 0")
        return cls([value] + [0] * order)

    @classmethod
    def identity(cls, order: int) -> "Series":
        """The series x, to the given order."""
        if order < 1:
            raise ValueError("the identity series needs order >= 1")
        return cls([0, 1] + [0] * (order - 1))

    @classmethod
    def zero(cls, order: int = 0) -> "Series":
        return cls([0] * (order + 1))

    @property
    def order(self) -> int:
        return len(self._coeffs) - 1

    @property
    def coeffs(self) -> tuple:
        return self._coeffs

    def coefficient(self, k: int) -> Fraction:
        if not 0 <= k <= self.order:
            raise IndexError(f"coefficient of x^{k} is beyond truncation order {self.order}")
        return self._coeffs[k]

    __getitem__ = coefficient

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._coeffs)

    def truncate(self, order: int) -> "Series":
        """Forget coefficients above `order`; never extends."""
        if order < 0:
            raise ValueError("order must be >= 0")
        if order > self.order:
            raise ValueError(f"cannot extend a series of order {self.order} to order {order}")
        return Series(self._coeffs[: order + 1])

    def is_zero(self) -> bool:
        return not any(self._coeffs)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Series":
        if isinstance(other, Series):
            n = min(self.order, other.order)
            return Series(a + b for a, b in zip(self._coeffs, other._coeffs))
        c = _as_fraction(other)
        return Series((self._coeffs[0] + c,) + self._coeffs[1:])

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series(-c for c in self._coeffs)

    def __sub__(self, other) -> "Series":
        return self + (-other if isinstance(other, Series) else -_as_fraction(other))

    def __rsub__(self, other) -> "Series":
        return (-self) + _as_fraction(other)

    def __mul__(self, other) -> "Series":
        if isinstance(other, Series):
            n = min(self.order, other.order)
            return Series(_mul_lists(list(self._coeffs), list(other._coeffs), n))
        c = _as_fraction(other)
        return Series(c * a for a in self._coeffs)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Series":
        c = _as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a series by zero")
        return self * (1 / c)

    def __pow__(self, exponent: int) -> "Series":
        """Integer power by binary exponentiation; order is preserved."""
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("series powers take a non-negative integer exponent")
        result = Series.constant(1, self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(self._coeffs)

    # -- calculus ------------------------------------------------------------

    def derivative(self) -> "Series":
        """Term-wise d/dx; the result order drops by one."""
        if self.order < 1:
            raise ValueError("derivative of an order-0 series is undefined (no x^1 data)")
        return Series(k * c for k, c in enumerate(self._coeffs) if k > 0)

    def antiderivative(self, constant: Scalar = 0) -> "Series":
        """Term-wise antiderivative with the given constant term; order grows by one."""
        out = [_as_fraction(constant)]
        out.extend(c / (k + 1) for k, c in enumerate(self._coeffs))
        return Series(out)

    def reciprocal(self) -> "Series":
        """Multiplicative inverse to the same order; needs a nonzero constant term."""
        c0 = self._coeffs[0]
        if not c0:
            raise ValueError("reciprocal needs a nonzero constant term")
        inv0 = 1 / c0
        out = [inv0]
        for m in range(1, self.order + 1):
            s = _ZERO
            for k in range(1, m + 1):
                ak = self._coeffs[k]
                if ak:
                    s += ak * out[m - k]
            out.append(-inv0 * s)
        return Series(out)

    def compose(self, inner: "Series") -> "Series":
        """self(inner(x)), truncated at the smaller order.

        The inner series must vanish at 0, otherwise every outer coefficient
        would contribute to each result coefficient.
        """
        if inner._coeffs[0]:
            raise ValueError("composition needs an inner series with zero constant term")
        n = min(self.order, inner.order)
        return Series(_compose_lists(list(self._coeffs[: n + 1]), list(inner._coeffs[: n + 1]), n))

    def revert(self) -> "Series":
        """Compositional inverse by Newton iteration.

        Given a(x) with a(0) = 0 and a'(0) != 0, returns b with
        a(b(x)) = x to this order.  Each step doubles the number of correct
        coefficients: if b is exact to order p and e = a(b) - x, then
        b - e*b' is exact to order 2p.  (revert_lagrange is the independent
        reference implementation.)
        """
        if self.order < 1:
            raise ValueError("reversion needs order >= 1")
        if self._coeffs[0]:
            raise ValueError("reversion needs a zero constant term")
        if not self._coeffs[1]:
            raise ValueError("reversion needs an invertible linear coefficient")
        n = self.order
        a = list(self._coeffs)
        b = [_ZERO, 1 / a[1]]
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            cur = b + [_ZERO] * (prec + 1 - len(b))
            err = _compose_lists(a[: prec + 1], cur, prec)
            err[1] -= _ONE
            dcur = [(k + 1) * cur[k + 1] for k in range(prec)]
            corr = _mul_lists(err, dcur, prec)
            b = [cur[k] - corr[k] for k in range(prec + 1)]
        return Series(b)

    # -- serialization -------------------------------------------------------

    def to_json_dict(self) -> dict:
        return {"order": self.order, "coeffs": [format_rational(c) for c in self._coeffs]}

    @classmethod
    def from_json_dict(cls, data: dict) -> "Series":
        coeffs = [parse_rational(c) for c in data["coeffs"]]
        if data["order"] != len(coeffs) - 1:
            raise ValueError("inconsistent order and coefficient count")
        return cls(coeffs)

    def __repr__(self) -> str:
        shown = ", ".join(format_rational(c) for c in self._coeffs)
        return f"Series([{shown}])"


def bessel_x_of_y(order: int) -> Series:
    """The series x(y) = -sqrt(y) J0'(2 sqrt(y)) = sum_{k>=1} (-1)^(k-1) y^k / ((k-1)! k!).

    Its compositional inverse y(x) generates the genus-0 volumes.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    coeffs = [_ZERO]
    coeffs.extend(
        Fraction((-1) ** (k - 1), factorial(k - 1) * factorial(k)) for k in range(1, order + 1)
    )
    return Series(coeffs)


def revert_lagrange(series: Series) -> Series:
    """Compositional inverse via Lagrange inversion: b_n = [y^(n-1)] (y/a)^n / n.

    Kept deliberately independent of Series.revert so the two can verify
    each other.
    """
    if series.order < 1:
        raise ValueError("reversion needs order >= 1")
    if series.coeffs[0]:
        raise ValueError("reversion needs a zero constant term")
    if not series.coeffs[1]:
        raise ValueError("reversion needs an invertible linear coefficient")
    n = series.order
    unit = Series(series.coeffs[1:])  # a(y)/y, constant term a_1 != 0
    u = unit.reciprocal()  # y/a(y), order n-1
    out = [_ZERO, u[0]]
    power = u
    for m in range(2, n + 1):
        power = power * u
        out.append(power[m - 1] / m)
    return Series(out)


def first_mismatch(
    a: Series, b: Series, upto: Optional[int] = None
) -> Optional[tuple]:
    """First (power, a_coeff, b_coeff) where the series differ, or None.

    Compares through min(a.order, b.order, upto).
    """
    top = min(a.order, b.order)
    if upto is not None:
        top = min(top, upto)
    for k in range(top + 1):
        if a[k] != b[k]:
            return (k, a[k], b[k])
    return None
