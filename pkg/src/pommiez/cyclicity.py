"""Cyclicity classification and invariant-subspace machinery.

The classifier decides whether the span of {D^n f : n >= 0} can be dense,
splitting on the zero structure of the generator g0:

* Case II (g0 = P e_lambda, finitely many zeros): f fails exactly when it
  lives on the same exponential line R e_lambda, or shares a zero with P.
  Both conditions are decidable: the structural test is exact, the common
  zeros are certified numerically at the roots of P.
* Case I (g0 with infinitely many zeros): f fails exactly when it shares a
  zero with g0.  When f is single-exponent its zeros are a finite certified
  set and the test is decisive; when both factors have infinitely many
  zeros only a disk |z| <= search_radius can be swept (argument-principle
  counting plus Newton refinement), so the classifier certifies NotCyclic
  verdicts but honestly returns Undetermined instead of Cyclic.

Verdict semantics for point tests: a point is declared a common zero only
when the evaluation is below tolerance AND the propagated evaluation error
cannot exclude zero; it is declared a non-zero only when the error disk
excludes zero; anything in between is Undetermined.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import (
    ExponentMismatch,
    InvalidG0,
    NonConvergence,
    PreconditionViolated,
)
from .duality import DividedSeries, duhamel
from .funcspace import ExpPoly
from .operators import OperatorContext, pommiez_exact_on_line
from .poly import Poly, _is_zero_scalar
from .roots import poly_roots
from .scalar import (
    BigComplex,
    GaussRational,
    QI_ONE,
    QI_ZERO,
    as_big,
    is_exact,
    scalar_abs_upper,
)

_CERT_PRECISION = 256
_MAX_RECT_EVALS = 6000


# ---------------------------------------------------------------------------
# verdicts


@dataclass(frozen=True)
class Witness:
    kind: str  # "common_zero" | "structural"
    location: object
    radius: object = 0
    detail: str = ""

    def location_string(self):
        if isinstance(self.location, GaussRational):
            return self.location.serialize()
        loc = self.location
        with mpmath.workprec(getattr(loc, "precision_bits", 64)):
            sign = "+" if loc.im >= 0 else ""
            return f"{mpmath.nstr(loc.re, 25)}{sign}{mpmath.nstr(loc.im, 25)}i"

    def radius_string(self):
        if isinstance(self.radius, int):
            return str(self.radius)
        return mpmath.nstr(mpmath.mpf(self.radius), 10)

    def to_json(self):
        doc = {
            "type": self.kind,
            "location": self.location_string(),
            "radius": self.radius_string(),
        }
        if self.detail:
            doc["detail"] = self.detail
        return doc


@dataclass(frozen=True)
class CyclicityVerdict:
    case_tag: str  # "I" | "II"
    verdict: str  # "Cyclic" | "NotCyclic" | "Undetermined"
    witness: Witness | None = None
    warnings: tuple = ()

    def to_json(self):
        doc = {
            "case": self.case_tag,
            "verdict": self.verdict,
            "witness": self.witness.to_json() if self.witness else None,
        }
        if self.warnings:
            doc["warnings"] = list(self.warnings)
        return doc


@dataclass(frozen=True)
class ClassifyOptions:
    search_radius: Fraction = Fraction(20)
    precision_bits: int = 128
    tolerance: object = None  # mpf; defaults to 2^(-precision_bits/2)
    region: object = None

    def tol(self):
        if self.tolerance is not None:
            return mpmath.mpf(self.tolerance)
        return mpmath.mpf(2) ** (-(self.precision_bits // 2))


# ---------------------------------------------------------------------------
# certified point tests


def _derivative_majorant(f, radius_about, prec):
    """Upper bound for |f'| on the disk |w| <= radius_about."""
    with mpmath.workprec(prec):
        r = mpmath.mpf(radius_about)
        total = mpmath.mpf(0)
        for lam, p in f.terms.items():
            dp = lam * p + p.derivative()
            growth = mpmath.exp(scalar_abs_upper(lam, prec) * r)
            poly_bound = mpmath.mpf(0)
            rp = mpmath.mpf(1)
            for c in dp.coeffs:
                poly_bound += scalar_abs_upper(c, prec) * rp
                rp *= r
            total += poly_bound * growth
        return total


def _certify_point(f, point, radius, tol, prec):
    """Classify f at an approximate point: 'zero' | 'nonzero' | 'unknown'.

    point is where f was evaluated, radius the inclusion radius of the true
    point around it.
    """
    with mpmath.workprec(prec):
        val = f.eval(point if isinstance(point, BigComplex) else as_big(point, prec), prec)
        av = abs(as_big(val, prec))
        slack = mpmath.mpf(2) ** (12 - prec) * (1 + av)
        reach = abs(as_big(point, prec)) + mpmath.mpf(radius)
        err = _derivative_majorant(f, reach, prec) * mpmath.mpf(radius) + slack
        if av <= err:
            if av <= tol:
                return "zero"
            return "unknown"
        if av > err:
            return "nonzero"
        return "unknown"


def _roots_with_retry(p, prec):
    for attempt in range(3):
        try:
            return poly_roots(p, prec << attempt)
        except NonConvergence:
            continue
    raise NonConvergence("root certification failed after precision doubling")


# ---------------------------------------------------------------------------
# argument-principle zero search


def _compile(f, prec):
    with mpmath.workprec(prec):
        terms = []
        for lam, p in f.terms.items():
            lamc = as_big(lam, prec).mpc()
            coeffs = [as_big(c, prec).mpc() for c in p.coeffs]
            terms.append((lamc, coeffs))

    def ev(z):
        total = mpmath.mpc(0)
        for lamc, coeffs in terms:
            pv = mpmath.mpc(0)
            for c in reversed(coeffs):
                pv = pv * z + c
            if pv:
                total += pv * mpmath.exp(lamc * z)
        return total

    return ev


def _rect_boundary(x0, x1, y0, y1, per_edge):
    pts = []
    for j in range(per_edge):
        s = mpmath.mpf(j) / per_edge
        pts.append(mpmath.mpc(x0 + (x1 - x0) * s, y0))
    for j in range(per_edge):
        s = mpmath.mpf(j) / per_edge
        pts.append(mpmath.mpc(x1, y0 + (y1 - y0) * s))
    for j in range(per_edge):
        s = mpmath.mpf(j) / per_edge
        pts.append(mpmath.mpc(x1 - (x1 - x0) * s, y1))
    for j in range(per_edge):
        s = mpmath.mpf(j) / per_edge
        pts.append(mpmath.mpc(x0, y1 - (y1 - y0) * s))
    return pts


def _winding(ev, rect, floor, per_edge=32, max_per_edge=256):
    """Winding count of ev over the rectangle boundary, or None if ambiguous."""
    x0, x1, y0, y1 = rect
    n = per_edge
    while True:
        pts = _rect_boundary(x0, x1, y0, y1, n)
        vals = [ev(z) for z in pts]
        if any(abs(v) < floor for v in vals):
            return "boundary"
        total = mpmath.mpf(0)
        ok = True
        for i in range(len(vals)):
            ratio = vals[(i + 1) % len(vals)] / vals[i]
            d = mpmath.arg(ratio)
            if abs(d) > mpmath.pi / 2:
                ok = False
                break
            total += d
        if ok:
            w = total / (2 * mpmath.pi)
            wi = int(mpmath.nint(w))
            if abs(w - wi) > mpmath.mpf("0.25"):
                return None
            return wi
        if n >= max_per_edge:
            return None
        n *= 2


def _newton_refine(ev, dev, z0, refine_prec, bound):
    with mpmath.workprec(refine_prec):
        z = mpmath.mpc(z0)
        stop = mpmath.mpf(2) ** (-(refine_prec * 3 // 4))
        last_step = mpmath.mpf(1)
        for _ in range(100):
            g = ev(z)
            dg = dev(z)
            if dg == 0:
                return None
            step = g / dg
            z = z - step
            last_step = abs(step)
            if abs(z) > 3 * bound:
                return None
            if last_step <= stop * (1 + abs(z)):
                g = ev(z)
                dg = dev(z)
                if dg == 0:
                    return None
                radius = 2 * abs(g / dg) + last_step
                return z, radius
        return None


def argument_principle_zeros(f, search_radius, precision_bits=128, refine_bits=None):
    """Zeros of f in the square |Re z|, |Im z| <= search_radius.

    Rectangle subdivision with boundary winding counts (128 sampled points
    per rectangle, locally densified), Newton refinement of isolated zeros,
    and a rectangle-diameter fallback radius when Newton stalls (the winding
    count itself certifies containment).
    """
    if f.is_zero():
        return []
    refine_bits = refine_bits or max(precision_bits, _CERT_PRECISION)
    out = []
    budget = [_MAX_RECT_EVALS]
    with mpmath.workprec(precision_bits):
        ev = _compile(f, precision_bits)
        ev_hi = _compile(f, refine_bits)
        dev_hi = _compile(f.derivative(), refine_bits)
        R = mpmath.mpf(search_radius.numerator) / search_radius.denominator
        floor = mpmath.mpf(2) ** (-(precision_bits // 2))
        min_side = R / (1 << 9)

        def handle(rect, depth):
            if budget[0] <= 0:
                raise NonConvergence("zero-search budget exhausted")
            budget[0] -= 1
            x0, x1, y0, y1 = rect
            w = _winding(ev, rect, floor)
            if w == "boundary" or w is None:
                # nudge outward so no zero sits on the sampled boundary
                if depth < 8:
                    grow = (x1 - x0) * mpmath.mpf(2) ** (-5 - depth)
                    handle((x0 - grow, x1 + grow, y0 - grow, y1 + grow), depth + 1)
                    return
                raise NonConvergence("ambiguous winding count at maximal depth")
            if w == 0:
                return
            side = x1 - x0
            if w == 1 and side <= R / (1 << 4) or side <= min_side:
                center = mpmath.mpc((x0 + x1) / 2, (y0 + y1) / 2)
                refined = _newton_refine(ev_hi, dev_hi, center, refine_bits, R)
                if refined is not None:
                    z, rad = refined
                    for _ in range(w):
                        out.append((BigComplex.from_mpc(z, refine_bits), rad))
                    return
                diam = mpmath.hypot(x1 - x0, y1 - y0)
                for _ in range(w):
                    out.append(
                        (BigComplex.from_mpc(center, precision_bits), diam / 2)
                    )
                return
            mx, my = (x0 + x1) / 2, (y0 + y1) / 2
            for sub in (
                (x0, mx, y0, my),
                (mx, x1, y0, my),
                (x0, mx, my, y1),
                (mx, x1, my, y1),
            ):
                handle(sub, depth)

        start = mpmath.mpf("0.5") ** 7
        handle((-R - start, R + start, -R - start, R + start), 0)

        # deduplicate zeros recovered twice from nudged rectangles
        unique = []
        for z, rad in out:
            dup = False
            for uz, urad in unique:
                if abs(z.mpc() - uz.mpc()) <= (rad + urad) * 4 + mpmath.mpf(2) ** (-40):
                    dup = True
                    break
            if not dup:
                unique.append((z, rad))
        return unique


# ---------------------------------------------------------------------------
# the classifier


def classify(f, g0, opts=None):
    """Cyclicity verdict for f with respect to the generator g0."""
    opts = opts or ClassifyOptions()
    if f.is_zero():
        raise PreconditionViolated("f must be nonzero")
    if not g0.constant_term() == QI_ONE:
        raise InvalidG0(f"g0(0) = {g0.constant_term()} != 1")
    prec = opts.precision_bits
    tol = opts.tol()
    warnings = []

    g_line = g0.single_term()
    if g_line is not None:
        lam, p = g_line
        if opts.region is None:
            warnings.append("no region supplied; exponent membership in Q unchecked")
        else:
            member = any(
                opts.region.polygon(i).contains(lam)
                for i in range(1, len(opts.region) + 1)
            )
            if not member:
                warnings.append("g0 exponent lies outside every region level")
        f_line = f.single_term()
        if f_line is not None and f_line[0] == lam:
            return CyclicityVerdict(
                "II",
                "NotCyclic",
                Witness("structural", lam, 0, "f = R*e_lambda on g0's line"),
                tuple(warnings),
            )
        return _decide_by_roots(
            "II", p, f, prec, tol, warnings, roots_of="g0"
        )

    # case I: g0 has infinitely many zeros
    f_line = f.single_term()
    if f_line is not None:
        mu, s = f_line
        if s.degree == 0:
            return CyclicityVerdict("I", "Cyclic", None, tuple(warnings))
        return _decide_by_roots("I", s, g0, prec, tol, warnings, roots_of="f")

    zeros = argument_principle_zeros(g0, Fraction(opts.search_radius), prec)
    for z, rad in zeros:
        status = _certify_point(f, z, rad, tol, max(prec, _CERT_PRECISION))
        if status == "zero":
            return CyclicityVerdict(
                "I",
                "NotCyclic",
                Witness("common_zero", z, rad, "shared zero of f and g0"),
                tuple(warnings),
            )
    warnings.append(
        "both factors have infinitely many zeros; only |z| <= "
        f"{opts.search_radius} was swept"
    )
    return CyclicityVerdict("I", "Undetermined", None, tuple(warnings))


def _decide_by_roots(case_tag, root_poly, other, prec, tol, warnings, roots_of):
    """Certify `other` at the zeros of root_poly; Cyclic iff none vanish."""
    if root_poly.degree < 1:
        return CyclicityVerdict(case_tag, "Cyclic", None, tuple(warnings))
    try:
        roots = _roots_with_retry(root_poly, max(prec, _CERT_PRECISION))
    except NonConvergence:
        warnings.append(f"could not certify the roots of {roots_of}'s polynomial part")
        return CyclicityVerdict(case_tag, "Undetermined", None, tuple(warnings))
    unknown = False
    for root, rad in roots:
        status = _certify_point(other, root, rad, tol, max(prec, _CERT_PRECISION))
        if status == "zero":
            return CyclicityVerdict(
                case_tag,
                "NotCyclic",
                Witness("common_zero", root, rad, "shared zero of f and g0"),
                tuple(warnings),
            )
        if status == "unknown":
            unknown = True
    if unknown:
        warnings.append("a zero test was inconclusive at this precision")
        return CyclicityVerdict(case_tag, "Undetermined", None, tuple(warnings))
    return CyclicityVerdict(case_tag, "Cyclic", None, tuple(warnings))


# ---------------------------------------------------------------------------
# consistency report for polynomial multiples


@dataclass(frozen=True)
class PfConsistencyReport:
    base_verdict: str
    product_verdict: str
    no_common_zero: object  # True/False/None(inconclusive)
    consistent: object

    def to_json(self):
        return {
            "base_verdict": self.base_verdict,
            "product_verdict": self.product_verdict,
            "no_common_zero": self.no_common_zero,
            "consistent": self.consistent,
        }


def pf_cyclicity_consistency(f, g0, p, opts=None):
    """Check: P*f is cyclic exactly when P and g0 share no zero.

    Requires a Cyclic base verdict for f.
    """
    opts = opts or ClassifyOptions()
    base = classify(f, g0, opts)
    if base.verdict != "Cyclic":
        raise PreconditionViolated("consistency check requires classify(f) = Cyclic")
    product = classify(ExpPoly.from_poly(p) * f, g0, opts)

    if p.degree < 1:
        predicate = True
    else:
        try:
            roots = _roots_with_retry(p, max(opts.precision_bits, _CERT_PRECISION))
        except NonConvergence:
            roots = None
        if roots is None:
            predicate = None
        else:
            predicate = True
            for root, rad in roots:
                status = _certify_point(
                    g0, root, rad, opts.tol(), max(opts.precision_bits, _CERT_PRECISION)
                )
                if status == "zero":
                    predicate = False
                    break
                if status == "unknown":
                    predicate = None
                    break

    if predicate is None or product.verdict == "Undetermined":
        consistent = None
    else:
        consistent = (product.verdict == "Cyclic") == predicate
    return PfConsistencyReport(base.verdict, product.verdict, predicate, consistent)


# ---------------------------------------------------------------------------
# invariant subspaces on the exponential line


def invariant_line_matrix(g0, n):
    """Exact matrix of D on the basis {z^k e^(lambda z)}_{k=0..n}.

    Requires g0 = P e_lambda with deg P <= n + 1 so the image of e_lambda
    stays inside the subspace.  For P = 1 the matrix is the nilpotent
    single shift of index n + 1.
    """
    ctx = g0 if isinstance(g0, OperatorContext) else OperatorContext(g0)
    line = ctx.single_line()
    if line is None:
        raise ExponentMismatch("invariant_line_matrix needs a single-exponent g0")
    lam, p = line
    if p.degree - 1 > n:
        raise PreconditionViolated(
            f"D(e_lambda) has degree {p.degree - 1} > n = {n}; not an invariant subspace"
        )
    cols = []
    for k in range(n + 1):
        image = pommiez_exact_on_line(ctx, ExpPoly.monomial_exp(k, lam))
        st = image.single_term()
        coeffs = st[1].coeffs if st is not None else ()
        cols.append([coeffs[i] if i < len(coeffs) else QI_ZERO for i in range(n + 1)])
    return tuple(
        tuple(cols[j][i] for j in range(n + 1)) for i in range(n + 1)
    )


def mat_mul(a, b):
    n = len(a)
    rows = []
    for i in range(n):
        acc = [QI_ZERO] * n
        for k in range(n):
            aik = a[i][k]
            if _is_zero_scalar(aik):
                continue
            brow = b[k]
            for j in range(n):
                if not _is_zero_scalar(brow[j]):
                    acc[j] = acc[j] + aik * brow[j]
        rows.append(tuple(acc))
    return tuple(rows)


def mat_is_zero(a):
    return all(_is_zero_scalar(c) for row in a for c in row)


def nilpotency_index(a):
    """Least e with a^e = 0, or None when a is not nilpotent."""
    n = len(a)
    power = a
    for e in range(1, n + 1):
        if mat_is_zero(power):
            return e
        power = mat_mul(power, a)
    return None


@dataclass(frozen=True)
class OrbitRankReport:
    rank: int
    hull_index: int

    def to_json(self):
        return {"rank": self.rank, "hull_index": self.hull_index}


def orbit_rank(g0, f):
    """Dimension of span{D^j f} on the exponential line, plus the hull index.

    Exact Gaussian elimination over the polynomial coefficient vectors; the
    hull index identifies the smallest invariant subspace P_n(e_lambda)
    containing the orbit.
    """
    ctx = g0 if isinstance(g0, OperatorContext) else OperatorContext(g0)
    line = ctx.single_line()
    if line is None:
        raise ExponentMismatch("orbit_rank needs a single-exponent g0")
    lam, p = line
    st = f.single_term()
    if st is None or st[0] != lam:
        raise ExponentMismatch("f must live on g0's exponential line")

    dim_bound = max(st[1].degree, p.degree - 1) + 1
    basis = {}  # pivot index -> normalized vector (list)
    hull = -1
    rank = 0
    cur = f
    for _ in range(dim_bound + 2):
        if cur.is_zero():
            break
        vec = list(cur.single_term()[1].coeffs)
        hull = max(hull, len(vec) - 1)
        vec += [QI_ZERO] * (dim_bound + 2 - len(vec))
        # reduce against the basis
        for pivot in sorted(basis, reverse=True):
            c = vec[pivot]
            if not _is_zero_scalar(c):
                bvec = basis[pivot]
                vec = [vec[i] - c * bvec[i] for i in range(len(vec))]
        pivot = None
        for i in range(len(vec) - 1, -1, -1):
            if not _is_zero_scalar(vec[i]):
                pivot = i
                break
        if pivot is None:
            break
        inv = 1 / vec[pivot]
        basis[pivot] = [v * inv for v in vec]
        rank += 1
        cur = pommiez_exact_on_line(ctx, cur)
    return OrbitRankReport(rank, hull)


# ---------------------------------------------------------------------------
# ideals in the Duhamel algebra


@dataclass(frozen=True)
class IdealMembershipReport:
    n: int
    in_ideal: bool
    first_nonzero_w: object
    first_nonzero_product: object

    def to_json(self):
        return {
            "n": self.n,
            "in_ideal": self.in_ideal,
            "first_nonzero_w": self.first_nonzero_w,
            "first_nonzero_product": self.first_nonzero_product,
        }


def ideal_membership(n, v, w):
    """Verify the ideal property of T_n = {h : h^(j)(0) = 0, j <= n}.

    Requires w in T_n (divided coefficients 0..n vanish); computes v * w
    exactly and confirms it stays in T_n, reporting the first nonvanishing
    divided index on both sides.
    """
    if w.valid_order < n + 1 or v.valid_order < n + 1:
        raise PreconditionViolated(f"series orders must be >= {n + 1}")
    for m in range(n + 1):
        if not _is_zero_scalar(w.dcoeffs[m]):
            raise PreconditionViolated(
                f"w has nonzero divided coefficient at index {m} <= n = {n}"
            )
    order = min(v.valid_order, w.valid_order)
    v = DividedSeries(v.dcoeffs[: order + 1])
    w = DividedSeries(w.dcoeffs[: order + 1])
    product = duhamel(v, w)
    in_ideal = all(_is_zero_scalar(product.dcoeffs[m]) for m in range(n + 1))
    return IdealMembershipReport(
        n, in_ideal, w.first_nonzero_index(), product.first_nonzero_index()
    )
