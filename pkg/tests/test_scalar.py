from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pommiez.scalar import (
    BigComplex,
    GaussRational,
    as_big,
    exp_scalar,
    _hex_to_mpf,
    _mpf_to_hex,
)

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=30
)
gauss = st.builds(GaussRational, rationals, rationals)


class TestGaussRational:
    def test_construction_normalizes(self):
        q = GaussRational(Fraction(2, 4), Fraction(-6, 9))
        assert q.re == Fraction(1, 2) and q.im == Fraction(-2, 3)

    def test_serialize_roundtrip(self):
        q = GaussRational(Fraction(-3, 7), Fraction(5, 11))
        assert q.serialize() == "-3/7+5/11i"
        assert GaussRational.from_string(q.serialize()) == q

    def test_zero_serialization(self):
        assert GaussRational(0).serialize() == "0/1+0/1i"

    @given(gauss, gauss, gauss)
    @settings(max_examples=150, deadline=None)
    def test_field_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a and a * b == b * a
        if not a.is_zero():
            assert a * (1 / a) == GaussRational(1)
            assert (b / a) * a == b

    def test_division_exact(self):
        a = GaussRational(1, 2)
        b = GaussRational(3, -4)
        assert (a / b) * b == a

    def test_power(self):
        i = GaussRational(0, 1)
        assert i**2 == GaussRational(-1)
        assert i**0 == GaussRational(1)

    def test_hashable_as_dict_key(self):
        d = {GaussRational(Fraction(1, 2)): "x"}
        assert d[GaussRational(Fraction(2, 4))] == "x"


class TestBigComplex:
    def test_min_precision_enforced(self):
        with pytest.raises(ValueError):
            BigComplex(1, 0, 32)

    def test_mixed_precision_takes_minimum(self):
        a = BigComplex(1, 0, 256)
        b = BigComplex(2, 0, 128)
        assert (a * b).precision_bits == 128
        assert (a + b).precision_bits == 128

    def test_rational_coercion_keeps_precision(self):
        a = BigComplex(1, 0, 192)
        assert (a + GaussRational(Fraction(1, 3))).precision_bits == 192

    def test_negation_is_lossless(self):
        with mpmath.workprec(192):
            x = mpmath.mpf(16) / 9
        a = BigComplex._raw(x, mpmath.mpf(0), 192)
        assert (-(-a)).re == a.re

    def test_exp_precision(self):
        e = exp_scalar(GaussRational(1), 192)
        with mpmath.workprec(210):
            assert abs(e.re - mpmath.exp(mpmath.mpf(1))) < mpmath.mpf(2) ** -190

    def test_exp_exact_at_zero(self):
        assert exp_scalar(GaussRational(0)) == GaussRational(1)

    def test_hex_serialization_roundtrip(self):
        with mpmath.workprec(200):
            x = mpmath.mpf(1) / 7
        assert _hex_to_mpf(_mpf_to_hex(x)) == x
        assert _hex_to_mpf(_mpf_to_hex(mpmath.mpf(0))) == 0
        a = BigComplex._raw(x, -x, 200)
        doc = a.serialize()
        back = BigComplex.deserialize(doc)
        assert back.re == a.re and back.im == a.im and back.precision_bits == 200

    def test_division(self):
        a = BigComplex(3, 4, 128)
        one = a / a
        with mpmath.workprec(128):
            assert abs(one.mpc() - 1) < mpmath.mpf(2) ** -120

    def test_as_big(self):
        v = as_big(Fraction(1, 2), 128)
        assert v.re == mpmath.mpf("0.5")
