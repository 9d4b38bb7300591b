"""Exact Gaussian-rational scalars and roots of unity.

Every coefficient in the fermionic toric code lies in {+-1, +-i}, so the
default arithmetic is exact over Q(i). Values that are not Gaussian
rationals (e.g. cube roots of unity) fall back to Python ``complex``.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = [
    "Gaussian",
    "Scalar",
    "as_scalar",
    "is_zero",
    "scalar_close",
    "root_of_unity",
    "to_complex",
    "inverse",
    "conj",
]


class Gaussian:
    """Element ``re + i*im`` of the Gaussian rationals."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    @classmethod
    def _lift(cls, x):
        if isinstance(x, Gaussian):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x, 0)
        return None

    def __add__(self, other):
        o = Gaussian._lift(other)
        if o is None:
            return complex(self) + other
        return Gaussian(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return Gaussian(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = Gaussian._lift(other)
        if o is None:
            return complex(self) * other
        return Gaussian(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "Gaussian":
        return Gaussian(self.re, -self.im)

    def inverse(self) -> "Gaussian":
        n = self.abs2()
        if n == 0:
            raise ZeroDivisionError("inverse of zero Gaussian rational")
        return Gaussian(self.re / n, -self.im / n)

    def __truediv__(self, other):
        o = Gaussian._lift(other)
        if o is None:
            return complex(self) / other
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = Gaussian._lift(other)
        if o is None:
            return other / complex(self)
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return complex(self) ** k
        base = self if k >= 0 else self.inverse()
        out = Gaussian(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        o = Gaussian._lift(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"{self.re}"
        if self.re == 0:
            return f"{self.im}i"
        return f"({self.re}{'+' if self.im > 0 else '-'}{abs(self.im)}i)"

    def pair(self) -> list[str]:
        """``[re, im]`` as strings, the JSON wire form for exact values."""
        return [str(self.re), str(self.im)]


Scalar = Union[Gaussian, complex, int, Fraction]

I = Gaussian(0, 1)


def as_scalar(x, exact: bool = True) -> Scalar:
    """Coerce ``x`` to the scalar type for the chosen arithmetic mode.

    Accepts ints, Fractions, Gaussians, complex numbers, and ``[re, im]``
    pairs whose parts are ints or rational strings such as ``"1/2"``.
    """
    if isinstance(x, (list, tuple)):
        re, im = x
        x = Gaussian(Fraction(re), Fraction(im))
    if not exact:
        return complex(x)
    if isinstance(x, Gaussian):
        return x
    if isinstance(x, (int, Rational)):
        return Gaussian(x)
    if isinstance(x, complex):
        # only exactly representable values are lifted
        re, im = Fraction(x.real), Fraction(x.imag)
        if complex(float(re), float(im)) == x and re.denominator < 2**20 and im.denominator < 2**20:
            return Gaussian(re, im)
        return x
    raise TypeError(f"cannot coerce {x!r} to a scalar")


def is_zero(x, tol: float = 0.0) -> bool:
    if isinstance(x, Gaussian):
        return not x
    return abs(x) <= tol


def scalar_close(a, b, tol: float = 0.0) -> bool:
    if tol == 0.0 and isinstance(a, Gaussian) and isinstance(b, Gaussian):
        return a == b
    return abs(complex(a) - complex(b)) <= tol


def to_complex(x) -> complex:
    return complex(x)


def inverse(x):
    if isinstance(x, Gaussian):
        return x.inverse()
    return 1 / x


def conj(x):
    if isinstance(x, Gaussian):
        return x.conjugate()
    return complex(x).conjugate()


_EXACT_ROOTS = {0: Gaussian(1), 1: I, 2: Gaussian(-1), 3: -I}


def root_of_unity(k: int, n: int, exact: bool = True) -> Scalar:
    """``exp(2 pi i k / n)``; exact whenever it is a fourth root of unity."""
    k %= n
    if exact and (4 * k) % n == 0:
        return _EXACT_ROOTS[(4 * k) // n]
    return cmath.exp(2j * cmath.pi * k / n)
