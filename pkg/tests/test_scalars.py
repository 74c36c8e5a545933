from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from skeintrace.scalars import (
    QQ,
    Cyclotomic,
    cyclotomic_polynomial,
    euler_phi,
    format_scalar,
    parse_scalar,
)

# hand-checked cyclotomic polynomials (low degree first)
KNOWN_PHI = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    4: (1, 0, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    8: (1, 0, 0, 0, 1),
    12: (1, 0, -1, 0, 1),
}


@pytest.mark.parametrize("m,expect", sorted(KNOWN_PHI.items()))
def test_cyclotomic_polynomials(m, expect):
    assert cyclotomic_polynomial(m) == expect


def test_euler_phi():
    assert [euler_phi(m) for m in (1, 2, 3, 4, 5, 6, 8, 12)] == [1, 1, 2, 2, 4, 2, 4, 4]


def test_q_parse_format_roundtrip():
    for text in ["0", "5", "-3", "2/3", "-7/2"]:
        v = parse_scalar(QQ, text)
        assert format_scalar(QQ, v) == str(Fraction(text))


def test_q_parse_rejects_garbage():
    for bad in ["", "1.5", "a", "1/0x", "--2"]:
        with pytest.raises(ValueError):
            parse_scalar(QQ, bad)


def test_zeta4_is_imaginary_unit():
    F = Cyclotomic(4)
    i = F.zeta
    assert i * i == F.from_int(-1)
    assert format_scalar(F, i * i * i) == "-z"


def test_zeta3_cube_is_one():
    F = Cyclotomic(3)
    w = F.zeta
    assert w * w * w == F.one
    assert w * w == -w - F.one  # minimal polynomial relation


def test_cyclotomic_inverse():
    F = Cyclotomic(5)
    x = F.zeta + F.from_int(2)
    assert x * F.inv(x) == F.one


def test_cyclotomic_parse_format():
    F = Cyclotomic(8)
    x = parse_scalar(F, "z^3 - 1/2*z + 3")
    assert format_scalar(F, x) == "3 - 1/2*z + z^3"
    assert parse_scalar(F, format_scalar(F, x)) == x
    assert parse_scalar(F, "-z") == -F.zeta
    assert parse_scalar(F, "0") == F.zero


def test_cyclotomic_parse_reduces_high_powers():
    F = Cyclotomic(4)
    assert parse_scalar(F, "z^2") == F.from_int(-1)


@given(
    a=st.fractions(max_denominator=50),
    b=st.fractions(max_denominator=50),
    c=st.fractions(max_denominator=50),
)
def test_cyclotomic_field_axioms(a, b, c):
    F = Cyclotomic(12)
    x = F.from_fraction(a) + F.zeta * b
    y = F.from_fraction(c) - F.zeta * F.zeta * a
    z = F.zeta * c + F.from_fraction(b)
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    if x:
        assert x * F.inv(x) == F.one
