"""Ordinal Module.

Exact arithmetic on ordinals below epsilon-zero written in Cantor normal form.

An ordinal is a finite sum ``w^e1*c1 + w^e2*c2 + ... + w^ek*ck`` with exponents
``e1 > e2 > ... > ek`` (themselves ordinals) and positive integer coefficients. The
empty sum is 0. The module supplies the rank algebra used by the Cantor-Bendixson and
Pillay rank bounds: the ordinal sum (absorbing, not commutative), the natural
(Hessenberg) sum, right multiplication by a natural number and powers of omega.

Classes:
    Ordering: Result of a three-way comparison.
    Ordinal: Immutable ordinal in Cantor normal form.

Functions:
    cmp, add, natural_sum, mul_nat, omega_pow, parse.

Example:
    >>> from tametop.ordinal import Ordinal, natural_sum
    >>> a = Ordinal.parse("w^2 + w")
    >>> str(natural_sum(a, Ordinal.parse("w*2 + 3")))
    'w^2 + w*3 + 3'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import total_ordering
from typing import Iterable, Union

from tametop.exceptions import InputSyntaxError, TameTopError


class OrdinalError(TameTopError):
    """Raised on invalid ordinal construction or arithmetic (e.g. multiplying by 0)."""


class OrdinalSyntaxError(InputSyntaxError):
    """Raised when an ordinal literal cannot be parsed or is not in normal form."""


class Ordering(Enum):
    """Three-way comparison outcome."""

    LESS = -1
    EQUAL = 0
    GREATER = 1


Term = tuple["Ordinal", int]


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """An ordinal below epsilon-zero in Cantor normal form.

    Attributes:
        terms (tuple[tuple[Ordinal, int], ...]): ``(exponent, coefficient)`` pairs with
            strictly decreasing exponents and coefficients >= 1. Empty means 0.
    """

    terms: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        for position, (exponent, coefficient) in enumerate(self.terms):
            if not isinstance(exponent, Ordinal):
                raise OrdinalError(f"exponent {exponent!r} is not an Ordinal")
            if not isinstance(coefficient, int) or coefficient < 1:
                raise OrdinalError(f"coefficient {coefficient!r} must be a positive integer")
            if position and not _compare(self.terms[position - 1][0], exponent) > 0:
                raise OrdinalError("exponents must be strictly decreasing")

    # --- constructors -----------------------------------------------------------------

    @classmethod
    def zero(cls) -> "Ordinal":
        """Returns the ordinal 0."""
        return ZERO

    @classmethod
    def from_int(cls, value: int) -> "Ordinal":
        """Builds a finite ordinal.

        Args:
            value (int): A natural number.

        Returns:
            Ordinal: ``value`` as an ordinal.

        Raises:
            OrdinalError: If ``value`` is negative.
        """
        if value < 0:
            raise OrdinalError(f"ordinals are non-negative, got {value}")
        if value == 0:
            return ZERO
        return cls(((ZERO, value),))

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[Union["Ordinal", int], int]]) -> "Ordinal":
        """Normalizes an arbitrary sequence of monomials ``w^e*c`` read as an ordinal sum.

        Normalization is idempotent: normalized input is returned unchanged.

        Args:
            pairs: ``(exponent, coefficient)`` pairs; zero coefficients are dropped.

        Returns:
            Ordinal: The ordinal sum of the monomials, left to right.
        """
        total = ZERO
        for exponent, coefficient in pairs:
            if coefficient < 0:
                raise OrdinalError(f"negative coefficient {coefficient}")
            if coefficient == 0:
                continue
            exponent = _coerce(exponent)
            total = add(total, cls(((exponent, coefficient),)))
        return total

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        """Parses the textual syntax ``w^2*3 + w*1 + 4``; see `parse`."""
        return parse(text)

    # --- predicates -------------------------------------------------------------------

    def is_zero(self) -> bool:
        """True for the ordinal 0."""
        return not self.terms

    def is_finite(self) -> bool:
        """True when the ordinal is a natural number."""
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_successor(self) -> bool:
        """True for ordinals of the form alpha + 1."""
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def is_limit(self) -> bool:
        """True for nonzero ordinals that are not successors."""
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    @property
    def leading_exponent(self) -> "Ordinal":
        """Exponent of the leading term (0 for the ordinal 0)."""
        return self.terms[0][0] if self.terms else ZERO

    # --- python protocol --------------------------------------------------------------

    def __int__(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.from_int(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __lt__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = _coerce(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return _compare(self, other) < 0

    def __add__(self, other: Union["Ordinal", int]) -> "Ordinal":
        return add(self, _coerce(other))

    def __radd__(self, other: int) -> "Ordinal":
        return add(_coerce(other), self)

    def __mul__(self, other: int) -> "Ordinal":
        if not isinstance(other, int):
            return NotImplemented
        return mul_nat(self, other)

    def __str__(self) -> str:
        return to_string(self)

    def __repr__(self) -> str:
        return f"Ordinal({to_string(self)!r})"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def _coerce(value: Union[Ordinal, int]) -> Ordinal:
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Ordinal.from_int(value)
    raise OrdinalError(f"cannot interpret {value!r} as an ordinal")


def _compare(a: Ordinal, b: Ordinal) -> int:
    """Lexicographic comparison of Cantor normal forms."""
    for (exp_a, coef_a), (exp_b, coef_b) in zip(a.terms, b.terms):
        by_exponent = _compare(exp_a, exp_b)
        if by_exponent:
            return by_exponent
        if coef_a != coef_b:
            return -1 if coef_a < coef_b else 1
    if len(a.terms) == len(b.terms):
        return 0
    return -1 if len(a.terms) < len(b.terms) else 1


def cmp(a: Ordinal, b: Ordinal) -> Ordering:
    """Total order on normalized ordinals.

    Args:
        a (Ordinal): Left operand.
        b (Ordinal): Right operand.

    Returns:
        Ordering: LESS, EQUAL or GREATER.
    """
    return Ordering(_compare(a, b))


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    """Ordinal sum ``a + b``.

    Terms of ``a`` whose exponent is below the leading exponent of ``b`` are absorbed;
    a term with exactly that exponent has its coefficient merged.

    Args:
        a (Ordinal): Left summand.
        b (Ordinal): Right summand.

    Returns:
        Ordinal: The (non-commutative) ordinal sum.
    """
    if b.is_zero():
        return a
    lead_exponent, lead_coefficient = b.terms[0]
    kept: list[Term] = []
    for exponent, coefficient in a.terms:
        order = _compare(exponent, lead_exponent)
        if order > 0:
            kept.append((exponent, coefficient))
        elif order == 0:
            lead_coefficient += coefficient
            break
        else:
            break
    return Ordinal(tuple(kept) + ((lead_exponent, lead_coefficient),) + b.terms[1:])


def natural_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    """Natural (Hessenberg, "Cantor") sum: merge the normal forms term by term.

    Commutative and strictly monotone in each argument.

    Args:
        a (Ordinal): First summand.
        b (Ordinal): Second summand.

    Returns:
        Ordinal: ``a (+) b``.
    """
    merged: list[Term] = []
    left, right = list(a.terms), list(b.terms)
    while left and right:
        order = _compare(left[0][0], right[0][0])
        if order > 0:
            merged.append(left.pop(0))
        elif order < 0:
            merged.append(right.pop(0))
        else:
            exponent, coefficient = left.pop(0)
            merged.append((exponent, coefficient + right.pop(0)[1]))
    merged.extend(left or right)
    return Ordinal(tuple(merged))


def mul_nat(a: Ordinal, r: int) -> Ordinal:
    """Right multiplication by a positive natural: ``a`` added to itself ``r`` times.

    Only the leading coefficient is scaled, since the lower terms of all but the last
    copy are absorbed.

    Args:
        a (Ordinal): The ordinal.
        r (int): Multiplier, at least 1.

    Returns:
        Ordinal: ``a * r``.

    Raises:
        OrdinalError: If ``r`` < 1.
    """
    if not isinstance(r, int) or isinstance(r, bool) or r < 1:
        raise OrdinalError(f"multiplier must be a positive integer, got {r!r}")
    if a.is_zero():
        return a
    exponent, coefficient = a.terms[0]
    return Ordinal(((exponent, coefficient * r),) + a.terms[1:])


def omega_pow(d: Union[Ordinal, int]) -> Ordinal:
    """The ordinal ``w^d``.

    Args:
        d (Ordinal | int): Exponent.

    Returns:
        Ordinal: Single-term normal form with coefficient 1.
    """
    return Ordinal(((_coerce(d), 1),))


def to_string(a: Ordinal) -> str:
    """Renders an ordinal in the ``w^2*3 + w + 4`` syntax (``0`` for zero).

    Infinite exponents print as ``w^(...)``, which `parse` does not read back: the
    round-trip holds only when every exponent is a natural number.
    """
    if a.is_zero():
        return "0"
    parts: list[str] = []
    for exponent, coefficient in a.terms:
        if exponent.is_zero():
            parts.append(str(coefficient))
            continue
        if exponent == ONE:
            base = "w"
        elif exponent.is_finite():
            base = f"w^{int(exponent)}"
        else:
            base = f"w^({to_string(exponent)})"
        parts.append(base if coefficient == 1 else f"{base}*{coefficient}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<omega>[wω])|(?P<op>[\^*+]))")


def parse(text: str) -> Ordinal:
    """Parses ``w^2*3 + w*1 + 4`` (natural exponents only) into an `Ordinal`.

    Args:
        text (str): The literal; ``0`` denotes zero, ``ω`` is accepted for ``w``.

    Returns:
        Ordinal: The parsed ordinal.

    Raises:
        OrdinalSyntaxError: On malformed input or input that is not in normal form
            (exponents not strictly decreasing, zero coefficients).
    """
    tokens: list[tuple[str, str, int]] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN.match(text, position)
        if not match:
            raise OrdinalSyntaxError(f"unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        tokens.append((kind, match.group(kind), match.start(kind)))
        position = match.end()
    if not tokens:
        raise OrdinalSyntaxError("empty ordinal literal", 0)

    index = 0

    def expect_number() -> tuple[int, int]:
        nonlocal index
        if index >= len(tokens) or tokens[index][0] != "number":
            where = tokens[index][2] if index < len(tokens) else len(text)
            raise OrdinalSyntaxError("expected a natural number", where)
        value, where = int(tokens[index][1]), tokens[index][2]
        index += 1
        return value, where

    terms: list[tuple[int, int, int]] = []
    while True:
        if index >= len(tokens):
            raise OrdinalSyntaxError("expected a term", len(text))
        kind, lexeme, where = tokens[index]
        if kind == "number":
            coefficient, _ = expect_number()
            exponent = 0
        elif kind == "omega":
            index += 1
            exponent, coefficient = 1, 1
            if index < len(tokens) and tokens[index][1] == "^":
                index += 1
                exponent, _ = expect_number()
            if index < len(tokens) and tokens[index][1] == "*":
                index += 1
                coefficient, _ = expect_number()
        else:
            raise OrdinalSyntaxError(f"unexpected {lexeme!r}", where)
        terms.append((exponent, coefficient, where))
        if index >= len(tokens):
            break
        if tokens[index][1] != "+":
            raise OrdinalSyntaxError(f"expected '+', got {tokens[index][1]!r}", tokens[index][2])
        index += 1

    if len(terms) == 1 and terms[0][:2] == (0, 0):
        return ZERO
    previous = None
    for exponent, coefficient, where in terms:
        if coefficient == 0:
            raise OrdinalSyntaxError("zero coefficient is not in normal form", where)
        if previous is not None and exponent >= previous:
            raise OrdinalSyntaxError("exponents must be strictly decreasing", where)
        previous = exponent
    return Ordinal(
        tuple((Ordinal.from_int(exponent), coefficient) for exponent, coefficient, _ in terms)
    )
