"""Exact phases as rational multiples of pi, normalized into [0, 2*pi)."""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True, order=True)
class Phase:
    """A phase angle (numerator/denominator)*pi with the fraction reduced
    and normalized into [0, 2).

    Addition is modulo 2*pi.  All angles used by the compiler are dyadic
    multiples of pi, but any rational multiple is representable.
    """

    numerator: int
    denominator: int

    def __init__(self, numerator: int, denominator: int = 1):
        frac = Fraction(numerator, denominator) % 2
        object.__setattr__(self, "numerator", frac.numerator)
        object.__setattr__(self, "denominator", frac.denominator)

    @classmethod
    def from_fraction(cls, frac: Fraction) -> "Phase":
        return cls(frac.numerator, frac.denominator)

    @classmethod
    def parse(cls, text: str) -> "Phase":
        """Parse a reduced-fraction-of-pi string such as "1/2" (= pi/2)."""
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(int(num), int(den))
        return cls(int(text))

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def radians(self) -> float:
        return float(self.fraction) * cmath.pi

    def phase_factor(self) -> complex:
        """exp(i * angle), exact for the dyadic angles used here."""
        return cmath.exp(1j * self.radians)

    def is_zero(self) -> bool:
        return self.numerator == 0

    def __add__(self, other: "Phase") -> "Phase":
        return Phase.from_fraction(self.fraction + other.fraction)

    def __sub__(self, other: "Phase") -> "Phase":
        return Phase.from_fraction(self.fraction - other.fraction)

    def __neg__(self) -> "Phase":
        return Phase.from_fraction(-self.fraction)

    def __str__(self) -> str:
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


ZERO = Phase(0)
PI = Phase(1)
HALF_PI = Phase(1, 2)
MINUS_HALF_PI = Phase(3, 2)
QUARTER_PI = Phase(1, 4)
