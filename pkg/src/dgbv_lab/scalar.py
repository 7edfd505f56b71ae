"""Exact Gaussian rationals ``re + im·i`` with ``re`` and ``im`` rational."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

from .errors import ScalarParseError

Number = Union[int, Fraction, "Scalar"]

_RATIONAL = r"[0-9]+(?:/[0-9]+)?"
_LITERAL = re.compile(
    rf"""^\s*
    (?:
        (?P<re_sign>[+-]?)(?P<re>{_RATIONAL})
        (?:\s*(?P<im_sign>[+-])\s*(?P<im>{_RATIONAL})?i)?
      |
        (?P<pure_sign>[+-]?)(?P<pure>{_RATIONAL})?i
    )
    \s*$""",
    re.VERBOSE,
)


def _rational(text: str | None, sign: str | None) -> Fraction:
    if text is None:
        value = Fraction(1)
    else:
        numerator, _, denominator = text.partition("/")
        if denominator and int(denominator) == 0:
            raise ScalarParseError(f"Zero denominator in scalar literal '{text}'")
        value = Fraction(int(numerator), int(denominator or 1))
    return -value if sign == "-" else value


def _format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class Scalar:
    """Immutable exact complex rational. Equality is exact and hashing agrees
    with ``Fraction`` for real values."""

    __slots__ = ("re", "im")

    re: Fraction
    im: Fraction

    def __init__(self, re: int | Fraction = 0, im: int | Fraction = 0) -> None:
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Scalar is immutable")

    @classmethod
    def coerce(cls, value: Number) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        raise TypeError(f"Cannot interpret {value!r} as an exact scalar")

    @classmethod
    def parse(cls, text: str | int) -> "Scalar":
        """Parse ``p/q``, ``p/q+r/si``, ``i``, ``-3/2i`` or a plain integer."""

        if isinstance(text, int) and not isinstance(text, bool):
            return cls(text)
        if not isinstance(text, str):
            raise ScalarParseError(f"Scalar literal must be a string, got {text!r}")
        match = _LITERAL.match(text)
        if match is None:
            raise ScalarParseError(f"Malformed scalar literal '{text}'")
        if match.group("re") is not None:
            real = _rational(match.group("re"), match.group("re_sign"))
            if match.group("im_sign") is None:
                return cls(real)
            return cls(real, _rational(match.group("im"), match.group("im_sign")))
        return cls(0, _rational(match.group("pure"), match.group("pure_sign")))

    def __str__(self) -> str:
        if not self.im:
            return _format_rational(self.re)
        magnitude = abs(self.im)
        imag = "i" if magnitude == 1 else f"{_format_rational(magnitude)}i"
        if not self.re:
            return f"-{imag}" if self.im < 0 else imag
        sign = "-" if self.im < 0 else "+"
        return f"{_format_rational(self.re)}{sign}{imag}"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __neg__(self) -> "Scalar":
        return Scalar(-self.re, -self.im)

    def __add__(self, other: Number) -> "Scalar":
        other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: Number) -> "Scalar":
        other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if isinstance(other, (int, Fraction)):
            return Scalar(self.re * other, self.im * other)
        other = Scalar.coerce(other)
        return Scalar(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "Scalar":
        other = Scalar.coerce(other)
        norm = other.re * other.re + other.im * other.im
        if not norm:
            raise ZeroDivisionError("Division by the zero scalar")
        numerator = self * other.conjugate()
        return Scalar(numerator.re / norm, numerator.im / norm)

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar.coerce(other) / self

    def conjugate(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return not self.im


ZERO = Scalar(0)
ONE = Scalar(1)
HALF = Scalar(Fraction(1, 2))
I = Scalar(0, 1)


def sign(exponent: int) -> int:
    """Return ``(-1) ** exponent``."""

    return -1 if exponent % 2 else 1
