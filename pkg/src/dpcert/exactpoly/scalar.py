"""Exact scalars over the Gaussian rationals Q(i).

Real scalars are plain ``int`` or ``Fraction`` values; a value with a
nonzero imaginary part is a :class:`Gaussian`.  Arithmetic between the two
kinds works in both directions and collapses back to a real value whenever
the imaginary part cancels, so equality stays structural.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Union


class Gaussian:
    """A Gaussian rational ``re + im*i`` with ``im != 0``.

    Do not call the constructor with ``im == 0``; use :func:`gaussian`,
    which returns a real value in that case.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("Gaussian is immutable")

    def __repr__(self):
        return f"Gaussian({self.re}, {self.im})"

    def __hash__(self):
        return hash((self.re, self.im))

    def __eq__(self, other):
        if isinstance(other, Gaussian):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __bool__(self):
        return True

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __pos__(self):
        return self

    def __add__(self, other):
        if isinstance(other, Gaussian):
            return gaussian(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Gaussian):
            return gaussian(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Fraction)):
            return Gaussian(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return Gaussian(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Gaussian):
            return gaussian(self.re * other.re - self.im * other.im,
                            self.re * other.im + self.im * other.re)
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return 0
            return Gaussian(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return Gaussian(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if isinstance(other, Gaussian):
            return self * other.conjugate() / other.norm()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Gaussian(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return other * self.conjugate() / self.norm()
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        result = 1
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


Scalar = Union[int, Fraction, Gaussian]

I = Gaussian(0, 1)


def gaussian(re, im=0) -> Scalar:
    """Build a scalar, collapsing to a real value when ``im == 0``."""
    if im == 0:
        return _real(re)
    return Gaussian(re, im)


def _real(value):
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value.numerator)
    if isinstance(value, (int, Fraction)):
        return value
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact rational: {value!r}")


def as_scalar(value) -> Scalar:
    """Coerce ints, Fractions, Gaussians and exact strings like ``"3/4"``."""
    if isinstance(value, Gaussian):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, (int, Fraction)):
        return _real(value)
    if isinstance(value, str):
        from .grammar import parse_scalar

        return parse_scalar(value)
    if isinstance(value, complex):
        raise TypeError("floating-point complex values are not exact")
    if isinstance(value, Rational):
        return _real(value)
    raise TypeError(f"cannot interpret {value!r} as an exact scalar")


def re_part(c: Scalar) -> Fraction:
    return c.re if isinstance(c, Gaussian) else Fraction(c)


def im_part(c: Scalar) -> Fraction:
    return c.im if isinstance(c, Gaussian) else Fraction(0)


def is_real(c: Scalar) -> bool:
    return not isinstance(c, Gaussian)


def inverse(c: Scalar) -> Scalar:
    if isinstance(c, Gaussian):
        return 1 / c
    if c == 0:
        raise ZeroDivisionError("scalar inverse of zero")
    return _real(Fraction(1) / c)


def div(a: Scalar, b: Scalar) -> Scalar:
    """Exact quotient that keeps integral results as ``int``."""
    if isinstance(a, Gaussian) or isinstance(b, Gaussian):
        return a / b
    return _real(Fraction(a) / b)


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_scalar(c: Scalar) -> str:
    """Canonical text of a scalar, e.g. ``-3/4``, ``1/2*i`` or ``(1-2*i)``."""
    if not isinstance(c, Gaussian):
        return format_rational(c)
    im_abs = abs(c.im)
    im_txt = "i" if im_abs == 1 else f"{format_rational(im_abs)}*i"
    if c.re == 0:
        return ("-" if c.im < 0 else "") + im_txt
    sign = "-" if c.im < 0 else "+"
    return f"({format_rational(c.re)}{sign}{im_txt})"
