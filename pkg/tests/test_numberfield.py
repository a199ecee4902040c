"""Arithmetic in Q and simple number fields"""

from fractions import Fraction

import mpmath
import pytest

from quartica.errors import FieldDivisionError, FieldMismatchError
from quartica.numberfield import (
    NumberField,
    aberth_roots,
    common_denominator,
    parse_rational,
    sort_roots,
)


def test_parse_rational_accepts_strings_and_ints():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" -7 ") == Fraction(-7)
    assert parse_rational(4) == Fraction(4)


def test_parse_rational_rejects_bool():
    with pytest.raises(ValueError):
        parse_rational(True)


def test_field_requires_monic_polynomial():
    with pytest.raises(ValueError):
        NumberField((1, 0, 2))


def test_field_root_index_range():
    with pytest.raises(ValueError):
        NumberField((2, 1, 1), root_index=2)


def test_rationals_generator_is_zero(qq):
    assert qq.is_rational
    assert qq.gen() == 0


def test_generator_satisfies_min_poly(klein_nf):
    e = klein_nf.gen()
    assert e * e + e + 2 == 0


def test_inverse_roundtrip(klein_nf):
    e = klein_nf.gen()
    x = 3 * e - Fraction(1, 2)
    assert x * x.inv() == 1
    assert (x / x) == klein_nf.one()
    assert e ** -2 * e ** 2 == 1


def test_inverse_of_zero_raises(klein_nf):
    with pytest.raises(FieldDivisionError):
        klein_nf.zero().inv()


def test_mixed_fields_raise(klein_nf):
    w = NumberField((1, 0, 0, 0, 1), label="Q(w)", root_index=3, symbol="w")
    with pytest.raises(FieldMismatchError):
        klein_nf.gen() + w.gen()


def test_equality_and_hash_with_rationals(klein_nf):
    a = klein_nf.from_rational(Fraction(2, 3))
    assert a == Fraction(2, 3)
    assert hash(a) == hash(Fraction(2, 3))
    assert a != klein_nf.gen()


def test_modular_image(klein_nf):
    # x^2 + x + 2 has the root 4 modulo 11
    e = klein_nf.gen()
    assert e.mod(11, 4) == 4
    assert (e * e).mod(11, 4) == 5
    assert klein_nf.from_rational(Fraction(1, 2)).mod(11, 4) == 6


def test_modular_image_bad_denominator(klein_nf):
    with pytest.raises(ValueError):
        klein_nf.from_rational(Fraction(1, 11)).mod(11, 4)


def test_embedding_uses_chosen_root(klein_nf):
    z = klein_nf.gen().embed_numeric(30)
    assert abs(z - mpmath.mpc(-0.5, mpmath.sqrt(7) / 2)) < mpmath.mpf(10) ** -25


def test_string_form(klein_nf):
    e = klein_nf.gen()
    assert str(2 * e - 1) == "-1 + 2*e"
    assert str(klein_nf.zero()) == "0"
    assert str(-e) == "-e"


def test_common_denominator(klein_nf):
    e = klein_nf.gen()
    values = [e / 4, klein_nf.from_rational(Fraction(1, 6)), e]
    assert common_denominator(values) == 12


def test_aberth_finds_roots_of_unity():
    roots = sort_roots(aberth_roots([-1, 0, 0, 0, 1], digits=30, seed=3))
    expected = [mpmath.mpc(-1, 0), mpmath.mpc(0, -1), mpmath.mpc(0, 1), mpmath.mpc(1, 0)]
    for z, w in zip(roots, expected):
        assert abs(z - w) < 1e-20


def test_aberth_keeps_multiplicity():
    # (x - 1)^2 (x + 2)
    roots = aberth_roots([2, -3, 0, 1], digits=30, seed=1)
    assert len(roots) == 3
    assert sum(1 for z in roots if abs(z - 1) < 1e-8) == 2


def test_aberth_zero_roots():
    roots = aberth_roots([0, 0, 1, 1], digits=20)
    assert sum(1 for z in roots if z == 0) == 2
    assert any(abs(z + 1) < 1e-15 for z in roots)
