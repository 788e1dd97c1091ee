# weakrank/models/rational.py
import math
from decimal import ROUND_HALF_UP, Decimal, localcontext
from fractions import Fraction
from typing import Annotated, Any

from pydantic import PlainSerializer, PlainValidator, WithJsonSchema


def to_fraction(value: Any) -> Fraction:
    """Exact rational from an int, Fraction, Decimal or a `p/q` / decimal string.

    Binary floats are read through their shortest decimal repr so `0.52` means 13/25.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational number: {value!r}")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not a rational number: {value!r}") from None
    raise ValueError(f"not a rational number: {value!r}")


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def round_2dp(value: Fraction) -> str:
    """Half-up rounding to two decimals, for reports only."""
    cents = math.floor(abs(value) * 100 + Fraction(1, 2))
    sign = "-" if value < 0 and cents else ""
    return f"{sign}{cents // 100}.{cents % 100:02d}"


def is_terminating(value: Fraction) -> bool:
    den = value.denominator
    for prime in (2, 5):
        while den % prime == 0:
            den //= prime
    return den == 1


def format_decimal(value: Fraction, digits: int = 30) -> str:
    """Exact decimal when the expansion terminates, otherwise `digits` places."""
    if value.denominator == 1:
        return str(value.numerator)
    if is_terminating(value):
        places = 0
        scaled = abs(value)
        while scaled.denominator != 1:
            scaled *= 10
            places += 1
        text = str(scaled.numerator).rjust(places + 1, "0")
        sign = "-" if value < 0 else ""
        return f"{sign}{text[:-places]}.{text[-places:]}"
    with localcontext() as ctx:
        ctx.prec = digits + len(str(abs(value.numerator) // value.denominator)) + 2
        exact = Decimal(value.numerator) / Decimal(value.denominator)
        return format(exact.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_UP), "f")


Rational = Annotated[
    Fraction,
    PlainValidator(to_fraction),
    PlainSerializer(format_fraction, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(\.\d+)?(/\d+)?$"}),
]
