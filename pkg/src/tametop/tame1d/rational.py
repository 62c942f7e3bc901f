"""Rational Module.

Exact coordinates of the line. Finite values are `fractions.Fraction`, the two infinite
ends are the floats ``-math.inf`` and ``math.inf``; both compare correctly against
fractions, which is all the interval code needs.
"""

import math
from fractions import Fraction
from typing import Union

Rat = Fraction
ExtRat = Union[Fraction, float]

NEG_INF: float = -math.inf
POS_INF: float = math.inf


def to_rat(value: Union[int, str, Fraction]) -> Fraction:
    """Coerces an int, a ``"p/q"`` string or a fraction to an exact rational.

    Raises:
        ValueError: If the value is not an exact rational literal.
    """
    if isinstance(value, float):
        raise ValueError(f"refusing inexact float {value!r}, write it as p/q")
    return Fraction(value)


def to_ext(value: Union[int, str, Fraction, float]) -> ExtRat:
    """Like `to_rat` but also accepts ``-oo``/``oo``/``inf`` spellings and infinite floats."""
    if isinstance(value, float):
        if math.isinf(value):
            return value
        raise ValueError(f"refusing inexact float {value!r}, write it as p/q")
    if isinstance(value, str):
        text = value.strip().lower()
        if text in ("oo", "+oo", "inf", "+inf", "infinity"):
            return POS_INF
        if text in ("-oo", "-inf", "-infinity"):
            return NEG_INF
    return Fraction(value)


def is_finite(value: ExtRat) -> bool:
    """True unless ``value`` is one of the two infinite ends."""
    return not (isinstance(value, float) and math.isinf(value))


def sign(value: ExtRat) -> int:
    """Sign of a (possibly infinite) value as -1, 0 or 1."""
    return (value > 0) - (value < 0)


def format_ext(value: ExtRat) -> str:
    """Canonical text: ``-oo``, ``oo``, ``p/q`` or ``p``."""
    if not is_finite(value):
        return "oo" if value > 0 else "-oo"
    return str(value)


def rat_pow(base: Fraction, exponent: int) -> Fraction:
    """Exact integer power (negative exponents allowed for nonzero bases)."""
    return base**exponent
