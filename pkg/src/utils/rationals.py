"""
Exact rational helpers shared by models, formats and solvers
"""
from decimal import Decimal
from fractions import Fraction
from typing import Annotated, Any, Iterable

from pydantic import BeforeValidator

ZERO = Fraction(0)
ONE = Fraction(1)


def to_fraction(value: Any) -> Fraction:
    """Convert int, str ("3/4", "0.75"), Decimal, float or Fraction exactly"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        # exact binary value of the double, never a rounded decimal
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    # numpy scalars and anything else exposing __float__
    return Fraction(float(value))


Rational = Annotated[Fraction, BeforeValidator(to_fraction)]


def format_rational(value: Fraction) -> str:
    """Always num/den, so 1 prints as 1/1"""
    value = to_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def exact_sum(values: Iterable[Fraction]) -> Fraction:
    total = ZERO
    for v in values:
        total += v
    return total
