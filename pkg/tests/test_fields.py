"""Field arithmetic: exactness, canonical forms, characteristic queries."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from startrace.errors import DivisionByZero, InfiniteField, InvalidField
from startrace.fields import MAX_PRIME, RATIONALS, PrimeField, field_from_string

PRIMES_TO_31 = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


def test_gf5_inverse_of_two():
    f = PrimeField(5)
    assert f.inv(2) == 3
    assert f.mul(2, f.inv(2)) == 1


def test_rational_add():
    assert RATIONALS.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)


def test_gf2_char_two_addition():
    f = PrimeField(2)
    assert f.add(1, 1) == 0


def test_characteristics():
    assert RATIONALS.characteristic == 0
    assert PrimeField(2).characteristic == 2
    assert PrimeField(7).characteristic == 7


def test_enumeration():
    assert list(PrimeField(2).elements()) == [0, 1]
    assert list(PrimeField(3).elements()) == [0, 1, 2]
    with pytest.raises(InfiniteField):
        RATIONALS.elements()


def test_canonical_zero():
    a = Fraction(3, 7)
    z = RATIONALS.add(a, RATIONALS.neg(a))
    assert z == 0 and z.denominator == 1
    f = PrimeField(11)
    assert f.add(8, f.neg(8)) == 0


def test_inverse_exhaustive_small_primes():
    for p in PRIMES_TO_31:
        f = PrimeField(p)
        for a in range(1, p):
            assert f.mul(f.inv(a), a) == 1


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        PrimeField(7).inv(0)
    with pytest.raises(DivisionByZero):
        RATIONALS.div(Fraction(1), Fraction(0))


def test_primality_checked_eagerly():
    for bad in (0, 1, 4, 9, 15, 2**31 - 2):
        with pytest.raises(InvalidField):
            PrimeField(bad)
    with pytest.raises(InvalidField):
        PrimeField(2**31 + 11)  # over the modulus cap
    # largest allowed prime works
    f = PrimeField(2**31 - 1)
    assert f.p <= MAX_PRIME
    assert f.mul(f.inv(12345), 12345) == 1


def test_field_text_encoding():
    assert str(RATIONALS) == "rational"
    assert str(PrimeField(7)) == "gf:7"
    assert field_from_string("rational") == RATIONALS
    assert field_from_string("gf:13") == PrimeField(13)
    for bad in ("gf:6", "real", "gf:x"):
        with pytest.raises(InvalidField):
            field_from_string(bad)


def test_scalar_text_encoding_roundtrip():
    q = RATIONALS
    for s in ("0", "5", "-3", "2/7", "-11/4"):
        assert q.format(q.parse(s)) == s
    f = PrimeField(13)
    for s in ("0", "5", "12"):
        assert f.format(f.parse(s)) == s
    assert f.parse("15") == 2  # reduced on the way in


def test_random_triples_field_axioms():
    rng = random.Random(2024)
    fields = [RATIONALS, PrimeField(13)]
    for fld in fields:
        for _ in range(500):
            a = fld.random_scalar(rng)
            b = fld.random_scalar(rng)
            c = fld.random_scalar(rng)
            assert fld.add(fld.add(a, b), c) == fld.add(a, fld.add(b, c))
            assert fld.mul(fld.mul(a, b), c) == fld.mul(a, fld.mul(b, c))
            assert fld.add(a, b) == fld.add(b, a)
            assert fld.mul(a, b) == fld.mul(b, a)
            assert fld.mul(a, fld.add(b, c)) == fld.add(fld.mul(a, b), fld.mul(a, c))


@given(st.fractions(), st.fractions(), st.fractions())
def test_rational_laws_hypothesis(a, b, c):
    q = RATIONALS
    assert q.mul(a, q.add(b, c)) == q.add(q.mul(a, b), q.mul(a, c))
    assert q.sub(a, b) == q.neg(q.sub(b, a))


@given(st.integers(0, 16), st.integers(0, 16), st.integers(0, 16))
def test_gf17_laws_hypothesis(a, b, c):
    f = PrimeField(17)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    if a != 0:
        assert f.mul(f.inv(a), a) == 1
