"""Gaussian rational scalars: exact elements of Q(i).

Every value the algebra operations produce lies in Q(i); keeping the scalars
exact means all comparisons downstream are plain equality.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class ScalarError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianRational:
    re: Fraction
    im: Fraction

    @staticmethod
    def of(re=0, im=0) -> "GaussianRational":
        return GaussianRational(Fraction(re), Fraction(im))

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, (int, Fraction)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __str__(self) -> str:
        if not self.im:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if not self.re:
            return imag if self.im > 0 else "-" + imag
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{imag}"

    __repr__ = __str__


ZERO = GaussianRational.of(0)
ONE = GaussianRational.of(1)
MINUS_ONE = GaussianRational.of(-1)
I = GaussianRational.of(0, 1)


def _parse_imag(token: str) -> Fraction:
    body = token[:-1]
    if body in ("", "+"):
        return Fraction(1)
    if body == "-":
        return Fraction(-1)
    return Fraction(body)


def parse_scalar(text: str) -> GaussianRational:
    """Parse literals like ``3/2``, ``-i``, ``1/2i`` or ``3/2-1/2i``."""
    s = text.strip()
    if not s:
        raise ScalarError("empty scalar literal")
    # split at a +/- that separates the real from the imaginary part
    split = None
    for k in range(1, len(s)):
        if s[k] in "+-" and s[k - 1] not in "+-/":
            split = k
    try:
        if split is not None and s.endswith("i"):
            return GaussianRational(Fraction(s[:split]), _parse_imag(s[split:]))
        if s.endswith("i"):
            return GaussianRational(Fraction(0), _parse_imag(s))
        return GaussianRational(Fraction(s), Fraction(0))
    except (ValueError, ZeroDivisionError) as exc:
        raise ScalarError(f"bad scalar literal {text!r}: {exc}") from None
