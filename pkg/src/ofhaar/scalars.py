"""Exact Gaussian-rational scalars plus the high-precision float fallback.

The engine runs on complex numbers whose real and imaginary parts are
rationals with arbitrary-precision integer numerators and denominators, so
Gram matrices, their inverses and all moments come out exact.  Deformation
matrices whose entries are not Gaussian rationals are carried instead by
mpmath numbers at a configurable working precision ("float mode"); those
values flow through the same generic code paths and are compared against a
tolerance rather than exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

import mpmath

#: working precision (bits) for float-mode matrices
DEFAULT_PRECISION_BITS = 256

#: comparison tolerance for float-mode equality and zero tests
DEFAULT_TOLERANCE = Fraction(1, 10**40)


class ExactScalar:
    """A complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _coerce(value):
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return ExactScalar(value)
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ExactScalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return ExactScalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.im and not other.im:
            return ExactScalar(self.re * other.re)
        return ExactScalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not other.re and not other.im:
            raise ZeroDivisionError("division by zero scalar")
        if not self.im and not other.im:
            return ExactScalar(self.re / other.re)
        norm = other.re * other.re + other.im * other.im
        return ExactScalar(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return ExactScalar(-self.re, -self.im)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return (ExactScalar(1) / self) ** (-exponent)
        result = ExactScalar(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- structure ----------------------------------------------------------

    def conjugate(self):
        return ExactScalar(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, always an exact rational."""
        return self.re * self.re + self.im * self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def to_fraction(self) -> Fraction:
        if self.im:
            raise ValueError(f"scalar {self} is not real")
        return self.re

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        # real values hash like the underlying Fraction so mixed-type
        # equality stays consistent with hashing
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __str__(self):
        return format_scalar(self)

    def __repr__(self):
        return f"ExactScalar({format_scalar(self)!r})"


_RATIONAL = r"(?:\d+/\d+|\d+\.\d+|\d+)"
_SCALAR_RE = re.compile(
    rf"^(?P<real>[+-]?{_RATIONAL})?(?P<imag>[+-](?:{_RATIONAL})?)?(?P<unit>i)?$"
)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q", an integer, or a finite decimal into an exact Fraction."""
    text = text.strip()
    if not re.fullmatch(rf"[+-]?{_RATIONAL}", text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def parse_scalar(text: str) -> ExactScalar:
    """Parse a Gaussian-rational literal such as "3/4", "-2i" or "1/2+3/4i"."""
    stripped = text.strip()
    match = _SCALAR_RE.match(stripped)
    if match is None or not stripped:
        raise ValueError(f"not a scalar literal: {text!r}")
    real_part, imag_part, unit = match.group("real", "imag", "unit")
    if unit is None:
        if imag_part is not None or real_part is None:
            raise ValueError(f"not a scalar literal: {text!r}")
        return ExactScalar(Fraction(real_part))
    if imag_part is None:
        # forms like "i", "-3/4i": the leading number is the imaginary part
        coeff = Fraction(real_part) if real_part is not None else Fraction(1)
        return ExactScalar(0, coeff)
    if imag_part in ("+", "-"):
        imag = Fraction(f"{imag_part}1")
    else:
        imag = Fraction(imag_part)
    real = Fraction(real_part) if real_part is not None else Fraction(0)
    return ExactScalar(real, imag)


def format_scalar(value) -> str:
    """Render a scalar losslessly: "p/q" (q=1 omitted), "a+bi", or a tagged float."""
    if isinstance(value, ExactScalar):
        if not value.im:
            return str(value.re)
        if not value.re:
            return f"{value.im}i"
        sign = "+" if value.im > 0 else ""
        return f"{value.re}{sign}{value.im}i"
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        digits = max(mpmath.mp.dps, 15)
        return f"float{mpmath.mp.prec}:{mpmath.nstr(value, digits)}"
    raise TypeError(f"cannot format {type(value).__name__} as a scalar")


def near_zero(value, tol: Fraction = DEFAULT_TOLERANCE) -> bool:
    """Zero test that is exact for rational carriers and tolerant for floats."""
    if isinstance(value, (ExactScalar, Fraction, int)):
        return not value
    return abs(value) < float(tol)


def rational_sqrt(value: Fraction):
    """Exact square root of a non-negative rational, or None if irrational."""
    if value < 0:
        raise ValueError("square root of a negative rational")
    num, den = value.numerator, value.denominator
    root_num, root_den = isqrt(num), isqrt(den)
    if root_num * root_num == num and root_den * root_den == den:
        return Fraction(root_num, root_den)
    return None
