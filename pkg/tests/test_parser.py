import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pommiez.errors import ExprSyntaxError, NonlinearExponent
from pommiez.funcspace import ExpPoly
from pommiez.parser import format_exppoly, parse_expr
from pommiez.poly import Poly
from pommiez.scalar import GaussRational


def q(re, im=0):
    return GaussRational(Fraction(re), Fraction(im))


class TestParse:
    def test_two_term_expression(self):
        f = parse_expr("(1+2*z)*exp(3*z) + z^2")
        assert f == ExpPoly(
            {q(3): Poly([q(1), q(2)]), q(0): Poly([q(0), q(0), q(1)])}
        )

    def test_normalization_collapses_to_zero(self):
        assert parse_expr("exp(z) - exp(z)").is_zero()

    def test_nonlinear_exponent_rejected(self):
        with pytest.raises(NonlinearExponent):
            parse_expr("exp(z^2)")

    def test_constant_exponent_rejected(self):
        with pytest.raises(NonlinearExponent):
            parse_expr("exp(3)")

    def test_affine_exponent_rejected(self):
        with pytest.raises(NonlinearExponent):
            parse_expr("exp(1 + z)")

    def test_nested_exponential_rejected(self):
        with pytest.raises(NonlinearExponent):
            parse_expr("exp(exp(z))")

    def test_bare_exponential(self):
        assert parse_expr("exp(z)") == ExpPoly.exponential(1)

    def test_rational_literals(self):
        f = parse_expr("2/3 + 5i - 1/2i*z")
        assert f == ExpPoly.from_poly(
            Poly([GaussRational(Fraction(2, 3), 5), GaussRational(0, Fraction(-1, 2))])
        )

    def test_complex_exponent_via_parenthesized_product(self):
        f = parse_expr("exp((1/2 + 1/3i)*z)")
        assert f == ExpPoly.exponential(GaussRational(Fraction(1, 2), Fraction(1, 3)))

    def test_unary_minus(self):
        assert parse_expr("-z") == ExpPoly.from_poly(Poly([q(0), q(-1)]))

    def test_power_of_parenthesized(self):
        assert parse_expr("(1 + z)^2") == ExpPoly.from_poly(Poly([q(1), q(2), q(1)]))

    def test_exponential_power(self):
        assert parse_expr("exp(z)^3") == ExpPoly.exponential(3)

    def test_syntax_error_position(self):
        with pytest.raises(ExprSyntaxError) as err:
            parse_expr("1 + $")
        assert err.value.position == 4

    def test_trailing_garbage(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("1 + z )")

    def test_unknown_identifier(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("w + 1")

    def test_zero_denominator(self):
        with pytest.raises(ExprSyntaxError):
            parse_expr("1/0")


small_fraction = st.fractions(min_value=-8, max_value=8, max_denominator=6)


@st.composite
def exppolys(draw):
    n_terms = draw(st.integers(1, 3))
    terms = []
    for _ in range(n_terms):
        lam = GaussRational(draw(small_fraction), draw(small_fraction))
        deg = draw(st.integers(0, 3))
        coeffs = [
            GaussRational(draw(small_fraction), draw(small_fraction))
            for _ in range(deg + 1)
        ]
        terms.append((lam, Poly(coeffs)))
    return ExpPoly(terms)


class TestRoundTrip:
    @given(exppolys())
    @settings(max_examples=120, deadline=None)
    def test_format_parse_roundtrip(self, f):
        assert parse_expr(format_exppoly(f)) == f

    def test_zero(self):
        assert parse_expr(format_exppoly(ExpPoly.zero())).is_zero()

    def test_seeded_random_roundtrip(self):
        from pommiez.suites import rand_exppoly

        rng = random.Random(13)
        for _ in range(60):
            f = rand_exppoly(rng, 3, 4)
            assert parse_expr(format_exppoly(f)) == f
