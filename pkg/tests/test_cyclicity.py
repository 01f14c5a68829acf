import random
from fractions import Fraction

import mpmath
import pytest

from pommiez.cyclicity import (
    ClassifyOptions,
    argument_principle_zeros,
    classify,
    ideal_membership,
    invariant_line_matrix,
    mat_is_zero,
    mat_mul,
    nilpotency_index,
    orbit_rank,
    pf_cyclicity_consistency,
)
from pommiez.duality import DividedSeries, Functional, commutant_apply
from pommiez.errors import (
    ExponentMismatch,
    InvalidG0,
    PreconditionViolated,
)
from pommiez.funcspace import ExpPoly
from pommiez.operators import OperatorContext, orbit, pommiez, pommiez_exact_on_line
from pommiez.parser import parse_expr
from pommiez.poly import Poly
from pommiez.region import ConvexPolygon, ConvexRegion
from pommiez.scalar import BigComplex, GaussRational, QI_ONE, QI_ZERO
from pommiez.suites import rand_gauss


def q(re, im=0):
    return GaussRational(Fraction(re), Fraction(im))


OPTS = ClassifyOptions()


class TestClassifyCaseII:
    def test_trivial_generator_exponential_is_cyclic(self):
        v = classify(parse_expr("exp(z)"), parse_expr("1"), OPTS)
        assert (v.case_tag, v.verdict) == ("II", "Cyclic")

    def test_polynomial_on_the_line_is_structural(self):
        v = classify(parse_expr("1 + z"), parse_expr("1"), OPTS)
        assert v.verdict == "NotCyclic" and v.witness.kind == "structural"

    def test_structural_takes_precedence_over_common_zero(self):
        v = classify(parse_expr("z - 1"), parse_expr("1 - z"), OPTS)
        assert v.verdict == "NotCyclic" and v.witness.kind == "structural"

    def test_common_zero_detected(self):
        v = classify(parse_expr("(z - 1)*exp(z)"), parse_expr("1 - z"), OPTS)
        assert v.verdict == "NotCyclic" and v.witness.kind == "common_zero"
        assert abs(v.witness.location.mpc() - 1) < 1e-30

    def test_root_avoided_is_cyclic(self):
        v = classify(parse_expr("exp(z)"), parse_expr("1 - z"), OPTS)
        assert v.verdict == "Cyclic"

    def test_complex_conjugate_roots(self):
        # P = 1 + z^2 vanishes at +-i; f shares the zero at i
        v = classify(parse_expr("(z - i)*exp(3*z)"), parse_expr("1 + z^2"), OPTS)
        assert v.verdict == "NotCyclic"
        assert abs(v.witness.location.mpc() - 1j) < 1e-30

    def test_invalid_generator_rejected(self):
        with pytest.raises(InvalidG0):
            classify(parse_expr("1"), parse_expr("2*exp(z)"), OPTS)

    def test_zero_f_rejected(self):
        with pytest.raises(PreconditionViolated):
            classify(ExpPoly.zero(), parse_expr("1"), OPTS)

    def test_region_warning_toggles(self):
        v = classify(parse_expr("exp(z)"), parse_expr("1"), OPTS)
        assert any("region" in w for w in v.warnings)
        region = ConvexRegion([ConvexPolygon.square(Fraction(2))])
        v2 = classify(
            parse_expr("exp(z)"),
            parse_expr("1"),
            ClassifyOptions(region=region),
        )
        assert not v2.warnings

    def test_verdict_json_shape(self):
        doc = classify(parse_expr("1 + z"), parse_expr("1"), OPTS).to_json()
        assert doc["case"] == "II" and doc["verdict"] == "NotCyclic"
        assert doc["witness"]["type"] == "structural"


class TestClassifyCaseI:
    def test_zero_free_f_is_cyclic(self):
        v = classify(parse_expr("1"), parse_expr("2 - exp(z)"), OPTS)
        assert (v.case_tag, v.verdict) == ("I", "Cyclic")

    def test_single_exponent_root_against_generator(self):
        v = classify(parse_expr("z"), parse_expr("2 - exp(z)"), OPTS)
        assert v.verdict == "Cyclic"  # g0(0) = 1 != 0

    def test_numeric_coefficient_common_zero(self):
        with mpmath.workprec(256):
            ln2 = BigComplex.from_mpc(mpmath.mpc(mpmath.log(2)), 256)
        f = ExpPoly({q(0): Poly([-ln2, QI_ONE])})
        v = classify(f, parse_expr("2 - exp(z)"), ClassifyOptions(precision_bits=256))
        assert v.verdict == "NotCyclic" and v.witness.kind == "common_zero"
        assert abs(float(v.witness.location.re) - 0.6931471805599453) < 1e-25

    def test_multi_multi_shared_zero(self):
        v = classify(
            parse_expr("4 - 4*exp(z) + exp(2*z)"),
            parse_expr("2 - exp(z)"),
            ClassifyOptions(search_radius=Fraction(8)),
        )
        assert v.verdict == "NotCyclic" and v.witness.kind == "common_zero"

    def test_multi_multi_disjoint_zeros_undetermined(self):
        v = classify(
            parse_expr("3 - exp(z)"),
            parse_expr("2 - exp(z)"),
            ClassifyOptions(search_radius=Fraction(8)),
        )
        assert v.verdict == "Undetermined"
        assert any("swept" in w for w in v.warnings)

    def test_rational_zero_in_both(self):
        # g0 = (1-z)(e^{2z} + e^{-z})/2 and f = (1-z)(e^z + 1) share the zero
        # z = 1 as well as z = +-i pi; any certified witness is acceptable
        g0 = parse_expr("(1 - z)*(exp(2*z) + exp(0-1*z))*1/2")
        f = parse_expr("(1 - z)*(exp(z) + 1)")
        v = classify(f, g0, ClassifyOptions(search_radius=Fraction(6)))
        assert v.verdict == "NotCyclic"
        loc = v.witness.location
        with mpmath.workprec(256):
            assert abs(f.eval(loc, 256).mpc()) < mpmath.mpf(2) ** -60
            assert abs(g0.eval(loc, 256).mpc()) < mpmath.mpf(2) ** -60


class TestArgumentPrincipleSearch:
    def test_finds_the_log_lattice(self):
        zeros = argument_principle_zeros(parse_expr("2 - exp(z)"), Fraction(20), 128)
        assert len(zeros) == 7  # ln 2 + 2 pi i k, |2 pi k| <= 20
        with mpmath.workprec(128):
            for z, rad in zeros:
                assert abs(z.re - mpmath.log(2)) < mpmath.mpf(2) ** -60
                k = mpmath.nint(z.im / (2 * mpmath.pi))
                assert abs(z.im - 2 * mpmath.pi * k) < mpmath.mpf(2) ** -60

    def test_zero_free_function(self):
        assert argument_principle_zeros(parse_expr("exp(z)"), Fraction(5), 128) == []


class TestPfConsistency:
    def test_zero_free_generator(self):
        report = pf_cyclicity_consistency(
            parse_expr("exp(z)"), parse_expr("1"), Poly([q(-1), q(1)]), OPTS
        )
        assert report.product_verdict == "Cyclic" and report.consistent is True

    def test_shared_zero_flips_verdict(self):
        report = pf_cyclicity_consistency(
            parse_expr("exp(z)"), parse_expr("1 - z"), Poly([q(-1), q(1)]), OPTS
        )
        assert report.product_verdict == "NotCyclic"
        assert report.no_common_zero is False and report.consistent is True

    def test_constant_multiplier(self):
        report = pf_cyclicity_consistency(
            parse_expr("exp(z)"), parse_expr("1"), Poly([q(1)]), OPTS
        )
        assert report.product_verdict == "Cyclic" and report.consistent is True

    def test_requires_cyclic_base(self):
        with pytest.raises(PreconditionViolated):
            pf_cyclicity_consistency(
                parse_expr("1 + z"), parse_expr("1"), Poly([q(1)]), OPTS
            )


class TestInvariantLineMatrix:
    def test_pure_shift(self):
        m = invariant_line_matrix(parse_expr("exp(2*z)"), 3)
        for i in range(4):
            for j in range(4):
                assert m[i][j] == (QI_ONE if j == i + 1 else QI_ZERO)

    def test_one_by_one_zero(self):
        m = invariant_line_matrix(ExpPoly.exponential(q(Fraction(1, 3))), 0)
        assert m == ((QI_ZERO,),)

    def test_nilpotency_index_exact(self):
        for n in (0, 1, 4, 7):
            m = invariant_line_matrix(parse_expr("exp(z)"), n)
            assert nilpotency_index(m) == n + 1

    def test_polynomial_generator_column(self):
        # g0 = (1 + z)e^z: D(e_1) = -e_1, D(z e_1) = e_1
        m = invariant_line_matrix(parse_expr("(1 + z)*exp(z)"), 1)
        assert m[0][0] == q(-1) and m[0][1] == QI_ONE

    def test_image_escape_rejected(self):
        with pytest.raises(PreconditionViolated):
            invariant_line_matrix(parse_expr("(1 + z^3)*exp(z)"), 1)

    def test_multi_exponent_rejected(self):
        with pytest.raises(ExponentMismatch):
            invariant_line_matrix(parse_expr("2 - exp(z)"), 2)

    def test_matrix_matches_series_pommiez(self):
        # cross-validate columns against the jet path
        rng = random.Random(3)
        for _ in range(6):
            lam = rand_gauss(rng, 2, 2)
            n = rng.randint(0, 4)
            g0 = ExpPoly.exponential(lam)
            ctx = OperatorContext(g0)
            m = invariant_line_matrix(g0, n)
            order = n + 3
            for k in range(n + 1):
                basis = ExpPoly.monomial_exp(k, lam)
                jet = pommiez(ctx, basis.taylor(order + 1))
                col = ExpPoly(
                    {lam: Poly([m[i][k] for i in range(n + 1)])}
                )
                assert col.taylor(order).coeffs == jet.truncate(order).coeffs


class TestOrbitRank:
    def test_cubic(self):
        r = orbit_rank(parse_expr("exp(2*z)"), parse_expr("z^3*exp(2*z)"))
        assert (r.rank, r.hull_index) == (4, 3)

    def test_generator_itself(self):
        r = orbit_rank(parse_expr("exp(2*z)"), parse_expr("exp(2*z)"))
        assert (r.rank, r.hull_index) == (1, 0)

    def test_degree_one(self):
        r = orbit_rank(parse_expr("exp(2*z)"), parse_expr("(1 + z)*exp(2*z)"))
        assert (r.rank, r.hull_index) == (2, 1)

    def test_exponent_mismatch(self):
        with pytest.raises(ExponentMismatch):
            orbit_rank(parse_expr("exp(2*z)"), parse_expr("exp(z)"))

    def test_classifier_orbit_consistency(self):
        # the finite-orbit oracle and the classifier agree on the line
        rng = random.Random(4)
        for _ in range(10):
            lam = rand_gauss(rng, 2, 2)
            deg = rng.randint(0, 5)
            coeffs = [rand_gauss(rng, 3, 3) for _ in range(deg)] + [QI_ONE]
            f = ExpPoly({lam: Poly(coeffs)})
            g0 = ExpPoly.exponential(lam)
            verdict = classify(f, g0, OPTS)
            assert verdict.verdict == "NotCyclic" and verdict.witness.kind == "structural"
            r = orbit_rank(g0, f)
            assert r.rank == deg + 1 and r.hull_index == deg


class TestCyclicSetInvariance:
    def test_operator_image_of_cyclic_stays_unblocked(self):
        # curated pairs where D f is exactly representable: f = z*h
        cases = [
            ("1", "z*exp(z)"),
            ("1", "z*exp(z) + z*exp(2*z)"),
            ("exp(3*z)", "z*exp(z)"),
            ("1 - z", "z*exp(z)"),
            ("exp(2*z)", "z*exp(z) + z"),
        ]
        for g0_text, f_text in cases:
            g0 = parse_expr(g0_text)
            f = parse_expr(f_text)
            ctx = OperatorContext(g0)
            base = classify(f, g0, OPTS)
            assert base.verdict == "Cyclic", (g0_text, f_text)
            image = f - ExpPoly([(l, p * f.constant_term()) for l, p in g0.terms.items()])
            # f(0) = 0 in every curated case, so D f = f/z is exact
            df = ExpPoly({lam: p.shift_down() for lam, p in image.terms.items()})
            v = classify(df, g0, OPTS)
            assert v.verdict != "NotCyclic", (g0_text, f_text, v)

    def test_nonzero_commutant_probe(self):
        # for cyclic f random commutant operators do not annihilate it
        rng = random.Random(5)
        g0 = parse_expr("1")
        ctx = OperatorContext(g0)
        f = parse_expr("exp(z)")
        assert classify(f, g0, OPTS).verdict == "Cyclic"
        prec = 128
        with mpmath.workprec(prec):
            for _ in range(20):
                atoms = [
                    (
                        rand_gauss(rng, 2, 2),
                        tuple(rand_gauss(rng, 2, 2) for _ in range(rng.randint(1, 2))),
                    )
                ]
                l = Functional(atoms)
                if l.is_zero():
                    continue
                values = []
                for k in range(1, 41):
                    z = q(Fraction(k, 7))
                    values.append(commutant_apply(l, f, z, ctx, prec))
                assert any(
                    abs(
                        v.mpc() if hasattr(v, "mpc") else complex(v.re, v.im)
                    )
                    > mpmath.mpf(2) ** -40
                    for v in values
                )


class TestIdealMembership:
    def test_linear_w(self):
        order = 8
        v = DividedSeries([q(1)] * (order + 1))
        w = DividedSeries([q(0), q(1)] + [q(0)] * (order - 1))
        report = ideal_membership(0, v, w)
        assert report.in_ideal and report.first_nonzero_w == 1

    def test_cubic_w_pattern(self):
        order = 8
        v = DividedSeries([q(1)] * (order + 1))  # e^z in divided coordinates
        w = DividedSeries([q(0)] * 3 + [q(6)] + [q(0)] * (order - 3))  # z^3
        report = ideal_membership(2, v, w)
        assert report.in_ideal
        assert report.first_nonzero_w == 3 and report.first_nonzero_product == 3

    def test_zero_w_rejected_or_trivial(self):
        order = 5
        v = DividedSeries([q(1)] * (order + 1))
        w = DividedSeries([q(0)] * (order + 1))
        report = ideal_membership(3, v, w)
        assert report.in_ideal and report.first_nonzero_w is None

    def test_precondition_violation(self):
        v = DividedSeries([q(1)] * 6)
        w = DividedSeries([q(1)] * 6)
        with pytest.raises(PreconditionViolated):
            ideal_membership(2, v, w)
