"""Entire-function representations.

Two carriers cover everything the operator calculus produces:

* ``ExpPoly`` -- exact exponential polynomials sum_j P_j(z) e^(lambda_j z),
  keyed by exponent.  Exponents are always Gaussian rationals so Maclaurin
  coefficients stay exactly representable; polynomial coefficients may be
  exact or BigComplex.
* ``TruncatedTaylor`` -- an order-K Maclaurin jet.  Operator images that
  leave the exponential-polynomial class (divided differences do) live here,
  with the valid order tracked so pipelines fail loudly instead of silently
  truncating.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import PrecisionExhausted, ZeroFunction
from .poly import Poly, _is_zero_scalar
from .scalar import (
    DEFAULT_PRECISION,
    BigComplex,
    GaussRational,
    QI_ONE,
    QI_ZERO,
    as_big,
    exp_scalar,
    is_exact,
)

_factorials = [1]


def factorial(n):
    while len(_factorials) <= n:
        _factorials.append(_factorials[-1] * len(_factorials))
    return _factorials[n]


def _as_exponent(x):
    if isinstance(x, GaussRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussRational(x)
    raise TypeError("exponents must be Gaussian rationals")


class TruncatedTaylor:
    """Maclaurin jet c_0..c_K; valid_order == K == len(coeffs) - 1."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(coeffs)
        if not cs:
            raise ValueError("a jet needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", cs)

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedTaylor is immutable")

    @classmethod
    def zero(cls, order):
        return cls((QI_ZERO,) * (order + 1))

    @property
    def valid_order(self):
        return len(self.coeffs) - 1

    def coefficient(self, k):
        if k > self.valid_order:
            raise PrecisionExhausted(
                f"coefficient {k} requested; jet valid through order {self.valid_order}"
            )
        return self.coeffs[k]

    def truncate(self, order):
        if order > self.valid_order:
            raise PrecisionExhausted(
                f"order {order} requested; jet valid through order {self.valid_order}"
            )
        return TruncatedTaylor(self.coeffs[: order + 1])

    # arithmetic at the minimum common order

    def __add__(self, other):
        n = min(self.valid_order, other.valid_order)
        return TruncatedTaylor(
            [self.coeffs[k] + other.coeffs[k] for k in range(n + 1)]
        )

    def __sub__(self, other):
        n = min(self.valid_order, other.valid_order)
        return TruncatedTaylor(
            [self.coeffs[k] - other.coeffs[k] for k in range(n + 1)]
        )

    def __neg__(self):
        return TruncatedTaylor([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, TruncatedTaylor):
            n = min(self.valid_order, other.valid_order)
            out = [QI_ZERO] * (n + 1)
            for i in range(n + 1):
                a = self.coeffs[i]
                if _is_zero_scalar(a):
                    continue
                for j in range(n + 1 - i):
                    out[i + j] = out[i + j] + a * other.coeffs[j]
            return TruncatedTaylor(out)
        return TruncatedTaylor([c * other for c in self.coeffs])

    def __rmul__(self, other):
        return TruncatedTaylor([other * c for c in self.coeffs])

    def shift_up(self):
        """Multiply by z; the appended coefficient is exact, so order grows."""
        return TruncatedTaylor((QI_ZERO,) + self.coeffs)

    def derivative(self):
        if self.valid_order == 0:
            raise PrecisionExhausted("cannot differentiate an order-0 jet")
        return TruncatedTaylor(
            [(k + 1) * self.coeffs[k + 1] for k in range(self.valid_order)]
        )

    def eval(self, z):
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * z + c
        return acc

    def to_poly(self):
        return Poly(self.coeffs)

    def to_big(self, precision_bits=DEFAULT_PRECISION):
        return TruncatedTaylor([as_big(c, precision_bits) for c in self.coeffs])

    def is_exactly_zero(self):
        return all(_is_zero_scalar(c) for c in self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedTaylor):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"TruncatedTaylor({list(self.coeffs)!r})"


class ZeroStructure:
    """Structural zero-set description of an exponential polynomial.

    A single-exponent function P*e_lambda has exactly the zeros of P
    (finitely many); any genuine multi-exponent combination has infinitely
    many zeros.
    """

    __slots__ = ("finite", "exponent", "poly")

    def __init__(self, finite, exponent=None, poly=None):
        object.__setattr__(self, "finite", finite)
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "poly", poly)

    def __setattr__(self, name, value):
        raise AttributeError("ZeroStructure is immutable")

    @classmethod
    def finitely_many(cls, exponent, poly):
        return cls(True, exponent, poly)

    @classmethod
    def infinitely_many(cls):
        return cls(False)

    def __repr__(self):
        if self.finite:
            return f"FinitelyMany({self.exponent}, {self.poly})"
        return "InfinitelyMany"


class ExpPoly:
    """Exact exponential polynomial: finite map exponent -> Poly.

    Normal form: exponents pairwise distinct, every stored polynomial
    nonzero; the zero function is the empty map.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        norm = {}
        for lam, p in items:
            lam = _as_exponent(lam)
            if not isinstance(p, Poly):
                p = Poly(p)
            if p.is_zero():
                continue
            if lam in norm:
                q = norm[lam] + p
                if q.is_zero():
                    del norm[lam]
                else:
                    norm[lam] = q
            else:
                norm[lam] = p
        object.__setattr__(self, "terms", norm)

    def __setattr__(self, name, value):
        raise AttributeError("ExpPoly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({GaussRational(0): Poly.constant(QI_ONE)})

    @classmethod
    def from_poly(cls, p):
        return cls({GaussRational(0): p})

    @classmethod
    def exponential(cls, lam):
        """e_lambda(z) = e^(lambda z)."""
        return cls({_as_exponent(lam): Poly.constant(QI_ONE)})

    @classmethod
    def monomial_exp(cls, k, lam, c=QI_ONE):
        """c * z^k * e^(lambda z)."""
        return cls({_as_exponent(lam): Poly.monomial(k, c)})

    # -- structure -----------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_polynomial(self):
        return all(not lam for lam in self.terms)

    def single_term(self):
        """(exponent, poly) when there is exactly one exponent, else None."""
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].re, kv[0].im))

    def __eq__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self):
        inner = ", ".join(f"{lam}: {p!r}" for lam, p in self.sorted_terms())
        return f"ExpPoly({{{inner}}})"

    # -- ring operations -------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        out = dict(self.terms)
        merged = list(out.items()) + list(other.terms.items())
        return ExpPoly(merged)

    def __sub__(self, other):
        if not isinstance(other, ExpPoly):
            return NotImplemented
        merged = list(self.terms.items()) + [(l, -p) for l, p in other.terms.items()]
        return ExpPoly(merged)

    def __neg__(self):
        return ExpPoly([(l, -p) for l, p in self.terms.items()])

    def __mul__(self, other):
        if isinstance(other, ExpPoly):
            out = []
            for l1, p1 in self.terms.items():
                for l2, p2 in other.terms.items():
                    out.append((l1 + l2, p1 * p2))
            return ExpPoly(out)
        return ExpPoly([(l, p * other) for l, p in self.terms.items()])

    def __rmul__(self, other):
        return ExpPoly([(l, other * p) for l, p in self.terms.items()])

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = ExpPoly.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_by_z(self):
        return ExpPoly([(l, p.shift_up()) for l, p in self.terms.items()])

    # -- calculus ------------------------------------------------------------

    def derivative(self):
        """Term (lambda, P) maps to (lambda, lambda*P + P')."""
        return ExpPoly(
            [(l, l * p + p.derivative()) for l, p in self.terms.items()]
        )

    def derivative_n(self, n):
        f = self
        for _ in range(n):
            f = f.derivative()
        return f

    def eval(self, z, precision_bits=DEFAULT_PRECISION):
        """Value at z; exact when every surviving exponential is trivial."""
        if isinstance(z, BigComplex):
            precision_bits = z.precision_bits
        total = QI_ZERO
        for lam, p in self.terms.items():
            pv = p.eval(z)
            if _is_zero_scalar(pv):
                continue
            arg = lam * z
            total = total + pv * exp_scalar(arg, precision_bits)
        return total

    def constant_term(self):
        """f(0), always exact: sum of the constant coefficients."""
        total = QI_ZERO
        for p in self.terms.values():
            total = total + p[0]
        return total

    def vanishes_exactly_at(self, q):
        """True when every polynomial part vanishes at the exact point q.

        For rational data this is equivalent to f(q) == 0: e^(mu_1), ...,
        e^(mu_n) are linearly independent over the rationals for distinct
        rational mu_j (Lindemann-Weierstrass), so no cross-term cancellation
        can occur.
        """
        return all(_is_zero_scalar(p.eval(q)) for p in self.terms.values())

    def taylor(self, order):
        """Exact Maclaurin jet through the given order."""
        if order < 0:
            raise ValueError("order must be >= 0")
        out = [QI_ZERO] * (order + 1)
        for lam, p in self.terms.items():
            powers = [QI_ONE]
            for _ in range(order):
                powers.append(powers[-1] * lam)
            for m in range(order + 1):
                acc = QI_ZERO
                for d in range(min(p.degree, m) + 1):
                    c = p[d]
                    if _is_zero_scalar(c):
                        continue
                    acc = acc + c * powers[m - d] * Fraction(1, factorial(m - d))
                out[m] = out[m] + acc
        return TruncatedTaylor(out)

    def taylor_at(self, point, order, precision_bits=DEFAULT_PRECISION):
        """Jet of f around an arbitrary point: f(point + u) through u^order.

        Exact whenever every factor e^(lambda * point) is (i.e. for
        polynomials, or at point 0); BigComplex otherwise.
        """
        point = point if not isinstance(point, (int, Fraction)) else GaussRational(point)
        out = [QI_ZERO] * (order + 1)
        for lam, p in self.terms.items():
            shifted = p.taylor_shift(point)
            scale = exp_scalar(lam * point, precision_bits)
            # e^(lambda u) series
            powers = [QI_ONE]
            for _ in range(order):
                powers.append(powers[-1] * lam)
            exp_series = [powers[m] * Fraction(1, factorial(m)) for m in range(order + 1)]
            for m in range(order + 1):
                acc = QI_ZERO
                for d in range(min(shifted.degree, m) + 1):
                    c = shifted[d]
                    if _is_zero_scalar(c):
                        continue
                    acc = acc + c * exp_series[m - d]
                if not _is_zero_scalar(acc):
                    out[m] = out[m] + scale * acc
        return TruncatedTaylor(out)

    def zero_structure(self):
        if self.is_zero():
            raise ZeroFunction("the zero function has no zero structure")
        st = self.single_term()
        if st is not None:
            return ZeroStructure.finitely_many(st[0], st[1])
        return ZeroStructure.infinitely_many()

    def translate(self, a, precision_bits=DEFAULT_PRECISION):
        """f(z + a).  Coefficients pick up e^(lambda a) factors, so the
        result is numeric unless every such factor is exactly 1."""
        a = _as_exponent(a) if isinstance(a, (int, Fraction)) else a
        out = []
        for lam, p in self.terms.items():
            scale = exp_scalar(lam * a, precision_bits)
            out.append((lam, p.taylor_shift(a) * scale))
        return ExpPoly(out)

    def max_poly_degree(self):
        return max((p.degree for p in self.terms.values()), default=-1)

    def is_exact(self):
        return all(all(is_exact(c) for c in p.coeffs) for p in self.terms.values())


# module-level operation names

def exppoly_eval(f, z, precision_bits=DEFAULT_PRECISION):
    return f.eval(z, precision_bits)


def exppoly_derivative(f):
    return f.derivative()


def exppoly_taylor(f, order):
    return f.taylor(order)


def exppoly_zero_structure(f):
    return f.zero_structure()
