from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from conjcert.errors import UsageError
from conjcert.fields import GF, QQ, QQI, FpElement, GaussianRational, is_prime


rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
)
gaussians = st.builds(GaussianRational, rationals, rationals)
f7 = st.integers(min_value=0, max_value=6).map(lambda v: FpElement(v, 7))


def test_prime_check():
    assert is_prime(2) and is_prime(3) and is_prime(97)
    assert not is_prime(1) and not is_prime(9) and not is_prime(91)
    with pytest.raises(UsageError):
        GF(6)


def test_rational_parse_format_roundtrip():
    for text in ["3", "-4/7", "0", "22/7"]:
        value = QQ.parse(text)
        assert QQ.parse(QQ.format(value)) == value
    with pytest.raises(UsageError):
        QQ.parse("0.5")
    with pytest.raises(UsageError):
        QQ.parse("1/0")


def test_gaussian_parse_format_roundtrip():
    samples = [
        GaussianRational.of("1/2", "-3/4"),
        GaussianRational.of(0, 1),
        GaussianRational.of(-3, 0),
        GaussianRational.of("2/5", "7"),
    ]
    for z in samples:
        assert QQI.parse(QQI.format(z)) == z
    assert QQI.parse("1/2+3/4 i") == GaussianRational.of("1/2", "3/4")
    assert QQI.parse("1/2-3/4 i") == GaussianRational.of("1/2", "-3/4")
    assert QQI.parse("-5/3") == GaussianRational.of("-5/3", 0)


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    if a:
        assert a * (1 / a) == 1
    assert Fraction(a).denominator > 0  # canonical form


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    assert a + b == b + a
    if a:
        assert a * a.inverse() == QQI.one()
        assert (a * b) / a == b


@given(f7, f7, f7)
def test_prime_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert (a + b) * c == a * c + b * c
    if a:
        assert a * a.inverse() == GF(7).one()


def test_prime_field_int_interop():
    x = GF(5).coerce(3)
    assert x + 4 == FpElement(2, 5)
    assert 2 * x == FpElement(1, 5)
    assert x - 4 == FpElement(4, 5)
    assert 1 / x == FpElement(2, 5)
    with pytest.raises(UsageError):
        x + GF(7).one()


def test_gaussian_int_interop():
    z = GaussianRational.of(1, 2)
    assert z + 1 == GaussianRational.of(2, 2)
    assert 2 * z == GaussianRational.of(2, 4)
    assert (1 - z) == GaussianRational.of(0, -2)
    assert z * z.conjugate() == GaussianRational.of(5, 0)
    assert GaussianRational.of(5, 0) == Fraction(5)


def test_field_constants():
    assert QQ.zero() == 0 and QQ.one() == 1
    assert QQI.i() * QQI.i() == GaussianRational.of(-1, 0)
    assert GF(3).coerce(-1) == FpElement(2, 3)
    assert GF(3).characteristic == 3 and QQ.characteristic == 0
