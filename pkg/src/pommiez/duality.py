"""Analytic functionals, the duality pairing, and the convolution algebra.

Functionals are finite combinations sum c_{p,k} * delta_p^(k) of derivative
evaluations -- exactly the class whose images under the exponential-kernel
transform J are exponential polynomials.  The Duhamel product

    v * w (z) = w(0) v(z) + int_0^z v(xi) w'(z - xi) dxi

is computed two ways: as the Cauchy product of divided coefficients
f^(n)(0) = n! * (Maclaurin coefficient n), which is exact on truncated
series, and in closed form on single-exponent exponential polynomials via
exact partial fractions of the product of Borel transforms.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .bijet import bj_mixed_partial, shift_T_bijet
from .errors import (
    PrecisionExhausted,
    PreconditionViolated,
    UnsupportedClosedForm,
)
from .funcspace import ExpPoly, TruncatedTaylor, factorial
from .poly import Poly, _is_zero_scalar
from .scalar import (
    DEFAULT_PRECISION,
    GaussRational,
    QI_ZERO,
    is_exact,
)


class Functional:
    """Finite derivative-evaluation combination sum c_{p,k} delta_p^(k).

    atoms: map point -> coefficient tuple (c_{p,0}, c_{p,1}, ...), trailing
    zeros stripped; the zero functional is the empty map.  Points are exact
    Gaussian rationals.
    """

    __slots__ = ("atoms",)

    def __init__(self, atoms=()):
        items = atoms.items() if isinstance(atoms, dict) else atoms
        norm = {}
        for point, coeffs in items:
            if isinstance(point, (int, Fraction)):
                point = GaussRational(point)
            cs = list(coeffs)
            if point in norm:
                old = norm[point]
                n = max(len(old), len(cs))
                cs = [
                    (old[k] if k < len(old) else QI_ZERO)
                    + (cs[k] if k < len(cs) else QI_ZERO)
                    for k in range(n)
                ]
            while cs and _is_zero_scalar(cs[-1]):
                cs.pop()
            if cs:
                norm[point] = tuple(cs)
            elif point in norm:
                del norm[point]
        object.__setattr__(self, "atoms", norm)

    def __setattr__(self, name, value):
        raise AttributeError("Functional is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def delta(cls, point, coeff=1):
        return cls([(point, (coeff,))])

    @classmethod
    def delta_derivative(cls, point, order, coeff=1):
        return cls([(point, (QI_ZERO,) * order + (coeff,))])

    @classmethod
    def from_derivatives_at_zero(cls, coeffs):
        return cls([(GaussRational(0), tuple(coeffs))])

    # -- algebra ------------------------------------------------------------

    def __add__(self, other):
        return Functional(list(self.atoms.items()) + list(other.atoms.items()))

    def __neg__(self):
        return Functional([(p, tuple(-c for c in cs)) for p, cs in self.atoms.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        return Functional(
            [(p, tuple(c * scalar for c in cs)) for p, cs in self.atoms.items()]
        )

    __rmul__ = __mul__

    def is_zero(self):
        return not self.atoms

    def __eq__(self, other):
        if not isinstance(other, Functional):
            return NotImplemented
        return self.atoms == other.atoms

    def sorted_atoms(self):
        return sorted(self.atoms.items(), key=lambda kv: (kv[0].re, kv[0].im))

    def __repr__(self):
        inner = ", ".join(f"{p}: {list(cs)}" for p, cs in self.sorted_atoms())
        return f"Functional({{{inner}}})"

    # -- serialization --------------------------------------------------------

    def to_json(self):
        return {
            "atoms": [
                {"point": p.serialize(), "coeffs": [str(c) for c in cs]}
                for p, cs in self.sorted_atoms()
            ]
        }

    @classmethod
    def from_json(cls, doc):
        atoms = []
        for entry in doc["atoms"]:
            point = GaussRational.from_string(entry["point"])
            coeffs = tuple(GaussRational.from_string(c) for c in entry["coeffs"])
            atoms.append((point, coeffs))
        return cls(atoms)

    def apply(self, f, precision_bits=DEFAULT_PRECISION):
        return apply_functional(self, f, precision_bits)


def apply_functional(phi, f, precision_bits=DEFAULT_PRECISION):
    """sum c_{p,k} f^(k)(p); exact wherever the data is exact.

    Jet input is supported for atoms at 0 only, with derivative orders
    bounded by the jet's valid order.
    """
    if isinstance(f, TruncatedTaylor):
        total = QI_ZERO
        for point, coeffs in phi.atoms.items():
            if not point.is_zero():
                raise PreconditionViolated(
                    "jet input supports atoms at 0 only"
                )
            if len(coeffs) - 1 > f.valid_order:
                raise PrecisionExhausted(
                    f"functional needs derivative order {len(coeffs) - 1}, "
                    f"jet valid through {f.valid_order}"
                )
            for k, c in enumerate(coeffs):
                total = total + c * factorial(k) * f.coeffs[k]
        return total
    max_order = max((len(cs) - 1 for cs in phi.atoms.values()), default=-1)
    derivs = [f]
    for _ in range(max_order):
        derivs.append(derivs[-1].derivative())
    total = QI_ZERO
    for point, coeffs in phi.atoms.items():
        for k, c in enumerate(coeffs):
            if _is_zero_scalar(c):
                continue
            total = total + c * derivs[k].eval(point, precision_bits)
    return total


def pair(x, h):
    """<x, h> = sum_m m! x_m h_m over deg(x) -- the duality pairing.

    h(z) = phi(e^(t z)) forces phi(t^m) = m! h_m, so the pairing of a
    polynomial against the transform is this finite exact sum.
    """
    if not isinstance(x, Poly):
        x = Poly(x)
    if x.is_zero():
        return QI_ZERO
    if isinstance(h, ExpPoly):
        coeffs = h.taylor(x.degree).coeffs
    elif isinstance(h, TruncatedTaylor):
        if h.valid_order < x.degree:
            raise PrecisionExhausted(
                f"pairing needs jet order {x.degree}, have {h.valid_order}"
            )
        coeffs = h.coeffs
    else:
        raise TypeError(f"unsupported carrier {type(h).__name__}")
    total = QI_ZERO
    for m in range(x.degree + 1):
        xm = x[m]
        if _is_zero_scalar(xm):
            continue
        total = total + factorial(m) * xm * coeffs[m]
    return total


def laplace_J(phi):
    """J(phi)(z) = phi(e_z): delta_p^(k) maps to z^k e^(p z)."""
    return ExpPoly([(p, Poly(cs)) for p, cs in phi.atoms.items()])


def laplace_J_inverse(h):
    """Structural inverse: read functional atoms off an ExpPoly."""
    return Functional([(lam, poly.coeffs) for lam, poly in h.terms.items()])


class DividedSeries:
    """Coefficients A_m = f^(m)(0) = m! * (Maclaurin coefficient m).

    These are the coordinates in which the Duhamel product is the plain
    Cauchy product.  Lossless bijection with TruncatedTaylor of equal order.
    """

    __slots__ = ("dcoeffs",)

    def __init__(self, dcoeffs):
        cs = tuple(dcoeffs)
        if not cs:
            raise ValueError("a divided series needs at least one coefficient")
        object.__setattr__(self, "dcoeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("DividedSeries is immutable")

    @property
    def valid_order(self):
        return len(self.dcoeffs) - 1

    @classmethod
    def unit(cls, order):
        return cls((GaussRational(1),) + (QI_ZERO,) * order)

    @classmethod
    def from_taylor(cls, jet):
        return cls([factorial(m) * c for m, c in enumerate(jet.coeffs)])

    @classmethod
    def from_exppoly(cls, f, order):
        return cls.from_taylor(f.taylor(order))

    def to_taylor(self):
        return TruncatedTaylor(
            [c * Fraction(1, factorial(m)) for m, c in enumerate(self.dcoeffs)]
        )

    def first_nonzero_index(self):
        for m, c in enumerate(self.dcoeffs):
            if not _is_zero_scalar(c):
                return m
        return None

    def __eq__(self, other):
        if not isinstance(other, DividedSeries):
            return NotImplemented
        return self.dcoeffs == other.dcoeffs

    def __repr__(self):
        return f"DividedSeries({list(self.dcoeffs)!r})"


def _duhamel_series(v, w):
    if v.valid_order != w.valid_order:
        raise PrecisionExhausted(
            f"series operands must share an order ({v.valid_order} vs {w.valid_order})"
        )
    n = v.valid_order
    out = [QI_ZERO] * (n + 1)
    for i, a in enumerate(v.dcoeffs):
        if _is_zero_scalar(a):
            continue
        for j in range(n + 1 - i):
            b = w.dcoeffs[j]
            if _is_zero_scalar(b):
                continue
            out[i + j] = out[i + j] + a * b
    return DividedSeries(out)


def _binomial_inverse_coeffs(q, c, count):
    """Taylor coefficients of (u + c)^(-(q+1)) around u = 0, c != 0."""
    out = []
    cpow = c ** (q + 1)
    for m in range(count):
        sign = 1 if m % 2 == 0 else -1
        out.append(sign * comb(q + m, m) / cpow)
        cpow = cpow * c
    return out


def _duhamel_monomials(cv, p, a, cw, q, b):
    """Closed form of (cv z^p e^(a z)) * (cw z^q e^(b z)).

    The divided coefficients of a Duhamel product are the Cauchy product of
    the factors' divided coefficients, i.e. the product corresponds to
    t * gamma_v(t) * gamma_w(t) on Borel transforms.  That rational function
    vanishes at infinity, so it equals the sum of its principal parts, which
    are computed exactly and mapped back through k!/(t-nu)^(k+1) <-> z^k e_nu.
    """
    scale = cv * cw * factorial(p) * factorial(q)
    if a == b:
        n = p + q
        poly = Poly.monomial(n, scale * Fraction(1, factorial(n)))
        if not (isinstance(a, GaussRational) and a.is_zero()):
            poly = poly + Poly.monomial(
                n + 1, scale * a * Fraction(1, factorial(n + 1))
            )
        return ExpPoly([(a, poly)])

    def principal_part(pole, order_p, other, order_q):
        # Taylor of h(t) = t / (t - other)^(order_q + 1) around the pole
        c = pole - other
        beta = _binomial_inverse_coeffs(order_q, c, order_p + 1)
        coeffs = [QI_ZERO] * (order_p + 1)
        for s in range(order_p + 1):
            h_s = pole * beta[s] + (beta[s - 1] if s >= 1 else QI_ZERO)
            # h_s / (t - pole)^(order_p + 1 - s)  ->  z^(order_p - s) e_pole / (order_p - s)!
            coeffs[order_p - s] = h_s * Fraction(1, factorial(order_p - s))
        return ExpPoly([(pole, scale * Poly(coeffs))])

    return principal_part(a, p, b, q) + principal_part(b, q, a, p)


def _duhamel_exppoly(v, w):
    sv, sw = v.single_term(), w.single_term()
    if sv is None or sw is None:
        raise UnsupportedClosedForm(
            "closed-form Duhamel products need single-exponent factors; "
            "fall back to divided-series mode"
        )
    (a, pv), (b, pw) = sv, sw
    out = ExpPoly.zero()
    for p, cv in enumerate(pv.coeffs):
        if _is_zero_scalar(cv):
            continue
        for q, cw in enumerate(pw.coeffs):
            if _is_zero_scalar(cw):
                continue
            out = out + _duhamel_monomials(cv, p, a, cw, q, b)
    return out


def duhamel(v, w):
    """Duhamel product; exact in both supported carriers.

    DividedSeries x DividedSeries -> Cauchy product (orders must agree);
    single-exponent ExpPoly x ExpPoly -> exact closed form
    (UnsupportedClosedForm on multi-exponent input).
    """
    if isinstance(v, DividedSeries) and isinstance(w, DividedSeries):
        return _duhamel_series(v, w)
    if isinstance(v, ExpPoly) and isinstance(w, ExpPoly):
        if v.is_zero() or w.is_zero():
            return ExpPoly.zero()
        return _duhamel_exppoly(v, w)
    raise TypeError("duhamel operands must both be DividedSeries or both ExpPoly")


def convolve(phi, psi, f, ctx, precision_bits=DEFAULT_PRECISION, tol=None):
    """(phi (x) psi)(f) = phi_z(psi(T_z(f))).

    The inner function g(z) = psi(T_z(f)) is entire; its z-derivatives at
    phi's atoms are read off bivariate jets of F(t, z) = T_z(f)(t) built by
    exact re-centering of the numerator and power-series division (never by
    finite differences).
    """
    if phi.is_zero() or psi.is_zero():
        return QI_ZERO
    total = QI_ZERO
    for zp, zcoeffs in phi.atoms.items():
        jv = len(zcoeffs) - 1
        for tp, tcoeffs in psi.atoms.items():
            ju = len(tcoeffs) - 1
            bj = shift_T_bijet(ctx, f, tp, zp, ju, jv, precision_bits, tol)
            for k, ck in enumerate(zcoeffs):
                if _is_zero_scalar(ck):
                    continue
                for j, cj in enumerate(tcoeffs):
                    if _is_zero_scalar(cj):
                        continue
                    total = total + ck * cj * bj_mixed_partial(bj, j, k)
    return total


def commutant_apply(l, f, z, ctx, precision_bits=DEFAULT_PRECISION):
    """Value at z of the commutant operator B(f)(z) = l(T_z(f)).

    f may be an ExpPoly or any carrier exposing eval/taylor_at (e.g. the
    PommiezQuotient image of D).  Per atom point p the jet of T_z(f) around
    p is built from the re-centered numerator
        N(p + u) = (p + u) f(p + u) g0(z) - z f(z) g0(p + u)
    and divided by (t - z) = (p - z) + u; on the diagonal p == z the
    constant term cancels and the division is a coefficient shift.
    """
    if l.is_zero():
        return QI_ZERO
    fz = f.eval(z, precision_bits)
    g0z = ctx.g0_value(z, precision_bits)
    total = QI_ZERO
    for p, coeffs in l.atoms.items():
        j = len(coeffs) - 1
        fj = f.taylor_at(p, j + 1, precision_bits)
        gj = ctx.g0.taylor_at(p, j + 1, precision_bits)
        # (p + u) * f(p + u)
        tf = [
            p * fj.coeffs[m] + (fj.coeffs[m - 1] if m >= 1 else QI_ZERO)
            for m in range(j + 2)
        ]
        numer = [tf[m] * g0z - z * fz * gj.coeffs[m] for m in range(j + 2)]
        c = p - z
        if (is_exact(c) and _is_zero_scalar(c)) or (not is_exact(c) and c.is_zero()):
            jet = numer[1:]
        else:
            jet = _div_by_c_plus_u(numer, c)[: j + 1]
        for k, ck in enumerate(coeffs):
            if _is_zero_scalar(ck):
                continue
            total = total + ck * factorial(k) * jet[k]
    return total


def _div_by_c_plus_u(coeffs, c):
    out = []
    prev = QI_ZERO
    for m, nm in enumerate(coeffs):
        q = nm / c if m == 0 else (nm - prev) / c
        out.append(q)
        prev = q
    return out
