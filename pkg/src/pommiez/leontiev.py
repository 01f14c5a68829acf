"""Borel transforms and the interpolation kernel omega_f(z, x).

The defining contour integral

    omega_f(z, x) = (1/2 pi i) oint_C ( int_0^t x(t - xi) e^(z xi) d xi ) gamma_f(t) dt

is never discretized: gamma_f (the Borel transform of an exponential
polynomial) is a finite sum of principal parts, so the outer integral
collapses by the Cauchy integral formula into derivatives of
G(t) = e^(z t) Y(t, z) at the poles, where Y(t, z) = int_0^t x(eta) e^(-z eta) d eta
has an elementary closed form.  G' = z G + x gives the derivative ladder

    G^(s)(t) = z^s G(t) + sum_{r=0}^{s-1} z^(s-1-r) x^(r)(t).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ExponentMismatch, InvalidG0, ZeroFunction
from .funcspace import ExpPoly, factorial
from .poly import Poly, _is_zero_scalar
from .scalar import (
    DEFAULT_PRECISION,
    GaussRational,
    QI_ONE,
    QI_ZERO,
    exp_scalar,
    is_exact,
)


class BorelTransform:
    """Principal parts of the Borel transform: pole nu -> coefficient list.

    Entry k of the list is the degree-k coefficient of the source
    polynomial part, so the transform reads sum_k a_{nu,k} k!/(t-nu)^(k+1);
    the pole set equals the exponent set of the source.
    """

    __slots__ = ("principal_parts",)

    def __init__(self, principal_parts):
        object.__setattr__(self, "principal_parts", dict(principal_parts))

    def __setattr__(self, name, value):
        raise AttributeError("BorelTransform is immutable")

    def poles(self):
        return set(self.principal_parts)

    def eval(self, t, precision_bits=DEFAULT_PRECISION):
        """Value of the transform at a point off the pole set."""
        total = QI_ZERO
        for nu, coeffs in self.principal_parts.items():
            d = t - nu
            inv = 1 / d
            power = inv
            for k, a in enumerate(coeffs):
                if not _is_zero_scalar(a):
                    total = total + a * factorial(k) * power
                power = power * inv
        return total

    def __repr__(self):
        inner = ", ".join(f"{nu}: {list(cs)}" for nu, cs in self.principal_parts.items())
        return f"BorelTransform({{{inner}}})"


def borel(f):
    """Linear extension of z^j e^(nu z) -> j! (t - nu)^(-j-1)."""
    if f.is_zero():
        raise ZeroFunction("the zero function has no Borel transform")
    return BorelTransform({nu: tuple(p.coeffs) for nu, p in f.terms.items()})


def Y_kernel(x, t, z, precision_bits=DEFAULT_PRECISION):
    """Y(t, z) = int_0^t x(eta) e^(-z eta) d eta in closed form.

    Per term c eta^m e^(mu eta) of x the integrand is c eta^m e^(beta eta)
    with beta = mu - z; the confluent branch beta == 0 integrates the bare
    polynomial exactly rather than taking a limit.
    """
    total = QI_ZERO
    for mu, p in x.terms.items():
        beta = mu - z
        beta_zero = beta.is_zero() if not isinstance(beta, (int, Fraction)) else beta == 0
        for m, c in enumerate(p.coeffs):
            if _is_zero_scalar(c):
                continue
            if beta_zero:
                total = total + c * _power_div(t, m + 1)
            else:
                # antiderivative e^(beta eta) sum_i (-1)^i m!/(m-i)! eta^(m-i) / beta^(i+1)
                inv = 1 / beta
                acc = QI_ZERO
                power_t = _powers(t, m)
                invp = inv
                for i in range(m + 1):
                    coef = factorial(m) // factorial(m - i)
                    term = coef * power_t[m - i] * invp
                    acc = acc + (term if i % 2 == 0 else -term)
                    invp = invp * inv
                boundary = acc * exp_scalar(beta * t, precision_bits)
                # at eta = 0 only the i = m term survives: (-1)^m m! / beta^(m+1)
                sign = 1 if m % 2 == 0 else -1
                at_zero = sign * factorial(m) * _power_inv(inv, m + 1)
                total = total + c * (boundary - at_zero)
    return total


def _powers(t, up_to):
    out = [QI_ONE]
    for _ in range(up_to):
        out.append(out[-1] * t)
    return out


def _power_inv(inv, n):
    out = QI_ONE
    for _ in range(n):
        out = out * inv
    return out


def _power_div(t, n):
    """t^n / n, exactly."""
    out = QI_ONE
    for _ in range(n):
        out = out * t
    return out * Fraction(1, n)


def omega(f, x, z, precision_bits=DEFAULT_PRECISION):
    """Interpolation pairing omega_f(z, x) by residue calculus.

    omega = sum over poles nu, orders k of a_{nu,k} G^(k)(nu) where
    G(t) = e^(z t) Y(t, z).  Exact whenever f is a polynomial and z exact.
    """
    if f.is_zero():
        raise ZeroFunction("omega is undefined for f = 0")
    gamma = borel(f)
    max_k = max(len(cs) for cs in gamma.principal_parts.values()) - 1
    x_derivs = [x]
    for _ in range(max(max_k - 1, 0)):
        x_derivs.append(x_derivs[-1].derivative())
    total = QI_ZERO
    for nu, coeffs in gamma.principal_parts.items():
        g_val = None
        x_at_nu = None
        for k, a in enumerate(coeffs):
            if _is_zero_scalar(a):
                continue
            if g_val is None:
                y = Y_kernel(x, nu, z, precision_bits)
                g_val = exp_scalar(z * nu, precision_bits) * y
            term = _zpow(z, k) * g_val
            for r in range(k):
                if x_at_nu is None:
                    x_at_nu = [d.eval(nu, precision_bits) for d in x_derivs]
                term = term + _zpow(z, k - 1 - r) * x_at_nu[r]
            total = total + a * term
    return total


def _zpow(z, n):
    if n == 0:
        return QI_ONE
    out = z
    for _ in range(n - 1):
        out = out * z
    return out


class OmegaExpansion:
    """Split of omega_{g0}(z, .) for a single-exponent g0 = P e_lambda.

    omega_{g0}(z, x) = g0(z) Y(lambda, z) + W(z) with
    W(z) = sum_{p=0}^{m-1} w_p(z) x^(p)(lambda) and
    w_p(z) = sum_{k=p+1}^{m} a_k z^(k-1-p); the w_p do not depend on x.
    """

    __slots__ = ("exponent", "exp_coeff", "w_polys")

    def __init__(self, exponent, exp_coeff, w_polys):
        object.__setattr__(self, "exponent", exponent)
        object.__setattr__(self, "exp_coeff", exp_coeff)
        object.__setattr__(self, "w_polys", tuple(w_polys))

    def __setattr__(self, name, value):
        raise AttributeError("OmegaExpansion is immutable")

    def exp_part(self, x, z, precision_bits=DEFAULT_PRECISION):
        y = Y_kernel(x, self.exponent, z, precision_bits)
        return (
            self.exp_coeff.eval(z)
            * exp_scalar(self.exponent * z, precision_bits)
            * y
        )

    def poly_part(self, x, z, precision_bits=DEFAULT_PRECISION):
        total = QI_ZERO
        deriv = x
        for p, w in enumerate(self.w_polys):
            if p > 0:
                deriv = deriv.derivative()
            total = total + w.eval(z) * deriv.eval(self.exponent, precision_bits)
        return total

    def evaluate(self, x, z, precision_bits=DEFAULT_PRECISION):
        return self.exp_part(x, z, precision_bits) + self.poly_part(
            x, z, precision_bits
        )


def omega_expansion(g0):
    """Exponential/polynomial split of omega_{g0} for g0 = P e_lambda, P(0)=1."""
    st = g0.single_term()
    if st is None:
        raise ExponentMismatch("omega_expansion needs a single-exponent g0")
    lam, p = st
    if not p[0] == QI_ONE:
        raise InvalidG0("the polynomial part must satisfy P(0) = 1")
    m = p.degree
    w_polys = []
    for q in range(m):
        w_polys.append(Poly([p[k] for k in range(q + 1, m + 1)]))
    return OmegaExpansion(lam, p, w_polys)
