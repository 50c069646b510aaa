"""Exact arithmetic in the Gaussian rationals Q(i).

Values are stored as an integer triple ``(a, b, d)`` meaning ``(a + b*i)/d``
with ``d > 0`` and ``gcd(a, b, d) == 1``.  The rational components are exposed
as :class:`fractions.Fraction` through :attr:`GaussianRational.re` and
:attr:`GaussianRational.im`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt
from numbers import Rational
from typing import Union

from .errors import DivisionByZero

BigRational = Fraction

Scalar = Union["GaussianRational", int, Fraction]


class GaussianRational:
    __slots__ = ("_a", "_b", "_d", "_hash")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        a = re.numerator * (d // re.denominator)
        b = im.numerator * (d // im.denominator)
        self._set(a, b, d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = gcd(gcd(a, b), d)
        if g != 1:
            a //= g
            b //= g
            d //= g
        self._a = a
        self._b = b
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        obj = object.__new__(cls)
        obj._set(a, b, d)
        return obj

    @classmethod
    def coerce(cls, value: Scalar) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, Rational):
            return cls._raw(value.numerator, 0, value.denominator)
        if isinstance(value, complex):
            raise TypeError("floating-point complex values are not exact")
        raise TypeError(f"cannot coerce {type(value).__name__} to GaussianRational")

    # -- components -----------------------------------------------------
    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def parts(self) -> tuple:
        """Integer triple ``(a, b, d)`` with value ``(a + b*i)/d``."""
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def is_real(self) -> bool:
        return self._b == 0

    def is_integer(self) -> bool:
        return self._b == 0 and self._d == 1

    def is_one(self) -> bool:
        return self._a == 1 and self._b == 0 and self._d == 1

    # -- field operations -----------------------------------------------
    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        d1, d2 = self._d, other._d
        if d1 == d2:
            return GaussianRational._raw(self._a + other._a, self._b + other._b, d1)
        return GaussianRational._raw(
            self._a * d2 + other._a * d1, self._b * d2 + other._b * d1, d1 * d2
        )

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d, obj._hash = -self._a, -self._b, self._d, None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        a1, b1, a2, b2 = self._a, self._b, other._a, other._b
        if b1 == 0 and b2 == 0:
            return GaussianRational._raw(a1 * a2, 0, self._d * other._d)
        return GaussianRational._raw(
            a1 * a2 - b1 * b2, a1 * b2 + b1 * a2, self._d * other._d
        )

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        if a == 0 and b == 0:
            raise DivisionByZero("division by zero in Q(i)")
        # d/(a+bi) = d(a-bi)/(a^2+b^2)
        n = a * a + b * b
        if n < 0:
            raise AssertionError
        return GaussianRational._raw(d * a, -d * b, n)

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            try:
                other = GaussianRational.coerce(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d, obj._hash = self._a, -self._b, self._d, None
        return obj

    # -- comparison -----------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        if isinstance(other, (int, Rational)):
            return self._b == 0 and Fraction(self._a, self._d) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self._b == 0:
                self._hash = hash(Fraction(self._a, self._d))
            else:
                self._hash = hash((self._a, self._b, self._d))
        return self._hash

    def __bool__(self):
        return not (self._a == 0 and self._b == 0)

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        return format_scalar(self)

    def sort_key(self) -> tuple:
        return (Fraction(self._a, self._d), Fraction(self._b, self._d))

    def to_complex(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)


ZERO = GaussianRational._raw(0, 0, 1)
ONE = GaussianRational._raw(1, 0, 1)
I = GaussianRational._raw(0, 1, 1)


def gr(value: Scalar, im: Scalar = 0) -> GaussianRational:
    """Build a Gaussian rational from real (and optional imaginary) parts."""
    if isinstance(value, GaussianRational) and im == 0:
        return value
    return GaussianRational(Fraction(value), Fraction(im))


def gr_arith(op: str, a: Scalar, b: Scalar) -> GaussianRational:
    a = GaussianRational.coerce(a)
    b = GaussianRational.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def gr_conjugate(a: Scalar) -> GaussianRational:
    return GaussianRational.coerce(a).conjugate()


def _fraction_text(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(c: GaussianRational) -> str:
    """Render ``a/b + c/d*i``; the imaginary part is omitted when zero."""
    re, im = c.re, c.im
    if im == 0:
        return _fraction_text(re)
    if abs(im) == 1:
        im_text = "i"
    else:
        im_text = f"{_fraction_text(abs(im))}*i"
    if re == 0:
        return im_text if im > 0 else f"-{im_text}"
    sign = "+" if im > 0 else "-"
    return f"{_fraction_text(re)} {sign} {im_text}"


def _rational_sqrt(q: Fraction):
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def gr_sqrt(w: GaussianRational):
    """Square root in Q(i), or ``None`` when ``w`` is not a square there."""
    p, q = w.re, w.im
    if q == 0:
        r = _rational_sqrt(p)
        if r is not None:
            return GaussianRational(r, 0)
        r = _rational_sqrt(-p)
        if r is not None:
            return GaussianRational(0, r)
        return None
    modulus = _rational_sqrt(p * p + q * q)
    if modulus is None:
        return None
    alpha = _rational_sqrt((p + modulus) / 2)
    if alpha is None or alpha == 0:
        return None
    beta = q / (2 * alpha)
    root = GaussianRational(alpha, beta)
    if root * root != w:
        return None
    return root
