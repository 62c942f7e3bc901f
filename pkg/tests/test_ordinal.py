"""Tests for Cantor normal form arithmetic."""

import pytest
from hypothesis import given, strategies as st

from tametop.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Ordinal,
    OrdinalError,
    OrdinalSyntaxError,
    Ordering,
    add,
    cmp,
    mul_nat,
    natural_sum,
    omega_pow,
    to_string,
)

finite_exponents = st.integers(min_value=0, max_value=4).map(Ordinal.from_int)
small_exponents = st.lists(
    st.tuples(finite_exponents, st.integers(min_value=1, max_value=3)), max_size=3
).map(Ordinal.from_terms)
ordinals = st.lists(
    st.tuples(small_exponents, st.integers(min_value=1, max_value=4)), max_size=4
).map(Ordinal.from_terms)
naturals = st.integers(min_value=0, max_value=1000)


def w(text: str) -> Ordinal:
    return Ordinal.parse(text)


class TestCompare:
    def test_finite_versus_omega(self):
        assert cmp(Ordinal.from_int(5), OMEGA) is Ordering.LESS
        assert cmp(OMEGA, Ordinal.from_int(5)) is Ordering.GREATER

    def test_leading_term_decides(self):
        assert cmp(w("w^2"), w("w*100 + 7")) is Ordering.GREATER

    def test_equal(self):
        assert cmp(w("w^2*3 + 1"), w("w^2*3 + 1")) is Ordering.EQUAL

    def test_tower_exponent(self):
        assert omega_pow(OMEGA) > omega_pow(Ordinal.from_int(100))

    @given(naturals, naturals)
    def test_agrees_with_integers(self, a, b):
        expected = Ordering((a > b) - (a < b))
        assert cmp(Ordinal.from_int(a), Ordinal.from_int(b)) is expected

    @given(ordinals, ordinals)
    def test_antisymmetric(self, a, b):
        assert cmp(a, b).value == -cmp(b, a).value


class TestAdd:
    def test_absorption(self):
        assert add(ONE, OMEGA) == OMEGA

    def test_not_commutative(self):
        assert add(OMEGA, ONE) == w("w + 1")
        assert add(OMEGA, ONE) != add(ONE, OMEGA)

    def test_merges_equal_leading_exponent(self):
        assert add(w("w^2 + w*3 + 1"), w("w*2 + 5")) == w("w^2 + w*5 + 5")

    def test_zero_identity(self):
        assert add(ZERO, OMEGA) == OMEGA
        assert add(OMEGA, ZERO) == OMEGA

    @given(naturals, naturals)
    def test_finite_is_integer_sum(self, a, b):
        assert add(Ordinal.from_int(a), Ordinal.from_int(b)) == a + b

    @given(ordinals, ordinals, ordinals)
    def test_associative(self, a, b, c):
        assert add(add(a, b), c) == add(a, add(b, c))

    @given(ordinals, ordinals)
    def test_below_natural_sum(self, a, b):
        assert cmp(add(a, b), natural_sum(a, b)) is not Ordering.GREATER


class TestNaturalSum:
    def test_example(self):
        assert natural_sum(ONE, OMEGA) == w("w + 1")

    def test_merge(self):
        assert natural_sum(w("w^2 + w"), w("w*2 + 3")) == w("w^2 + w*3 + 3")

    @given(ordinals, ordinals)
    def test_commutative(self, a, b):
        assert natural_sum(a, b) == natural_sum(b, a)

    @given(ordinals, ordinals, ordinals)
    def test_associative(self, a, b, c):
        assert natural_sum(natural_sum(a, b), c) == natural_sum(a, natural_sum(b, c))

    @given(ordinals, ordinals)
    def test_dominates_summands(self, a, b):
        total = natural_sum(a, b)
        assert cmp(total, a) is not Ordering.LESS
        assert cmp(total, b) is not Ordering.LESS


class TestMulNat:
    def test_scales_leading_coefficient(self):
        assert mul_nat(w("w + 1"), 3) == w("w*3 + 1")

    def test_zero(self):
        assert mul_nat(ZERO, 4) == ZERO

    @pytest.mark.parametrize("r", [0, -1])
    def test_rejects_non_positive(self, r):
        with pytest.raises(OrdinalError):
            mul_nat(OMEGA, r)

    @given(ordinals, st.integers(min_value=1, max_value=6))
    def test_repeated_sum(self, a, r):
        total = ZERO
        for _ in range(r):
            total = add(total, a)
        assert mul_nat(a, r) == total


class TestOmegaPow:
    def test_zero_exponent(self):
        assert omega_pow(ZERO) == ONE

    def test_finite_exponent(self):
        assert omega_pow(Ordinal.from_int(2)) == w("w^2")

    def test_nested_string(self):
        assert to_string(omega_pow(w("w + 1"))) == "w^(w + 1)"

    @given(ordinals)
    def test_absorbs_one(self, a):
        if not a.is_zero():
            assert add(ONE, omega_pow(a)) == omega_pow(a)


class TestSyntax:
    @pytest.mark.parametrize("text", ["0", "7", "w", "w*2 + 3", "w^3*2 + w^2 + 4"])
    def test_round_trip_of_literals(self, text):
        assert str(w(text)) == text

    def test_infinite_exponents_do_not_read_back(self):
        text = to_string(omega_pow(OMEGA))
        assert text == "w^(w)"
        with pytest.raises(OrdinalSyntaxError):
            w(text)

    def test_accepts_omega_symbol(self):
        assert w("ω^2") == w("w^2")

    @pytest.mark.parametrize(
        "text, position",
        [("w +", 3), ("w^2+x", 4), ("w + w^2", 4), ("w*0", 0), ("", 0)],
    )
    def test_errors_carry_position(self, text, position):
        with pytest.raises(OrdinalSyntaxError) as info:
            w(text)
        assert info.value.position == position

    def test_predicates(self):
        assert w("w + 1").is_successor()
        assert w("w^2").is_limit()
        assert Ordinal.from_int(3).is_finite()
        assert int(Ordinal.from_int(3)) == 3

    def test_negative_integer_rejected(self):
        with pytest.raises(OrdinalError):
            Ordinal.from_int(-1)
