"""The divided-difference operator calculus.

Everything here reduces to one kernel: dividing a truncated Maclaurin jet
by a linear factor (t - z).  The generalized backward shift D (with
generator g0, g0(0) = 1), the shift operators T_z and T~_z, and the plain
divided difference D_z are all jets of quotients

    D f    = (f(t) - g0(t) f(0)) / t
    T_z f  = (t f(t) g0(z) - z f(z) g0(t)) / (t - z)
    T~_z f = (f(t) g0(z) - f(z) g0(t)) / (t - z)
    D_z f  = (f(t) - f(z)) / (t - z)

Operator outputs are jets because the exponential-polynomial class is not
closed under these quotients.  The single exact closed-form channel is the
line C[z]*e_lambda when g0 = P*e_lambda, handled by pommiez_exact_on_line.
"""

from __future__ import annotations

import threading
from fractions import Fraction

from .errors import ExponentMismatch, InvalidG0, PrecisionExhausted, SingularAtZero
from .funcspace import ExpPoly, TruncatedTaylor, factorial
from .poly import Poly, _is_zero_scalar
from .scalar import DEFAULT_PRECISION, GaussRational, QI_ONE, QI_ZERO, is_exact

PHI_ORDER_CAP = 32


def _exact_zero(z):
    return (isinstance(z, (int, Fraction)) and z == 0) or (
        isinstance(z, GaussRational) and z.is_zero()
    )


def _div_by_c_plus_t(coeffs, c):
    """Unique Q with (c + t) * Q = N through the given order, c != 0."""
    out = []
    prev = QI_ZERO
    for m, nm in enumerate(coeffs):
        q = nm / c if m == 0 else (nm - prev) / c
        out.append(q)
        prev = q
    return out


def series_div_linear(numer, z):
    """Divide a jet by (t - z).

    For z != 0 the quotient is determined order by order, so the valid
    order is preserved.  For z = 0 the quotient is a coefficient shift;
    the constant term must vanish exactly (SingularAtZero otherwise) and
    the valid order necessarily drops by one.
    """
    if _exact_zero(z):
        if not _is_zero_scalar(numer.coeffs[0]):
            raise SingularAtZero("constant term nonzero; cannot divide by t")
        if numer.valid_order == 0:
            raise PrecisionExhausted("order-0 jet cannot absorb a shift down")
        return TruncatedTaylor(numer.coeffs[1:])
    return TruncatedTaylor(_div_by_c_plus_t(numer.coeffs, -z))


class OperatorContext:
    """Carries the generator g0 (g0(0) = 1) and its coefficient caches.

    Values are immutable except the lazily extended Maclaurin cache of g0
    and the functional-coefficient cache, both guarded by a lock.
    """

    def __init__(self, g0):
        if not isinstance(g0, ExpPoly):
            g0 = ExpPoly.from_poly(g0 if isinstance(g0, Poly) else Poly(g0))
        if not g0.constant_term() == QI_ONE:
            raise InvalidG0(f"g0(0) = {g0.constant_term()} != 1")
        self.g0 = g0
        self._lock = threading.Lock()
        self._g0_coeffs = []
        self._phi = {}

    def g0_coeffs(self, order):
        """Maclaurin coefficients of g0 through the given order (cached)."""
        with self._lock:
            if len(self._g0_coeffs) <= order:
                self._g0_coeffs = list(self.g0.taylor(max(order, 2 * len(self._g0_coeffs))).coeffs)
            return self._g0_coeffs[: order + 1]

    def g0_value(self, z, precision_bits=DEFAULT_PRECISION):
        return self.g0.eval(z, precision_bits)

    def single_line(self):
        """(lambda, P) when g0 = P * e_lambda, else None."""
        return self.g0.single_term()

    def phi_coefficients(self, n):
        """Coefficients gamma_0..gamma_n of the functional phi_n.

        phi_n(h) = sum_k gamma_k h^(k)(0) represents the n-th operator
        power at the origin: phi_n(h) = D^n(h)(0).  The gamma_k are read
        off by applying D^n to monomial jets; gamma_n = 1/n! always.
        """
        if n < 0:
            raise ValueError("n must be >= 0")
        if n > PHI_ORDER_CAP:
            raise ValueError(f"phi order capped at {PHI_ORDER_CAP}")
        with self._lock:
            cached = self._phi.get(n)
        if cached is not None:
            return cached
        gammas = []
        for k in range(n + 1):
            jet = TruncatedTaylor(
                [QI_ONE if m == k else QI_ZERO for m in range(n + 1)]
            )
            for _ in range(n):
                jet = pommiez(self, jet)
            gammas.append(jet.coeffs[0] * Fraction(1, factorial(k)))
        gammas = tuple(gammas)
        with self._lock:
            self._phi[n] = gammas
        return gammas


def pommiez(ctx, f):
    """One application of D to a jet: b_m = a_{m+1} - g_{m+1} a_0."""
    if f.valid_order == 0:
        raise PrecisionExhausted("jet of order 0 cannot absorb another division by t")
    g = ctx.g0_coeffs(f.valid_order)
    a0 = f.coeffs[0]
    return TruncatedTaylor(
        [f.coeffs[m + 1] - g[m + 1] * a0 for m in range(f.valid_order)]
    )


def pommiez_exact_on_line(ctx, f):
    """D on the exact channel C[z]*e_lambda (g0 = P*e_lambda, f = S*e_lambda).

    Returns ((S - P*S(0))/z) * e_lambda; the numerator constant term
    vanishes because P(0) = 1, so the division is exact.
    """
    line = ctx.single_line()
    if line is None:
        raise ExponentMismatch("g0 is not a single-exponent function")
    lam, p = line
    if f.is_zero():
        return ExpPoly.zero()
    st = f.single_term()
    if st is None or st[0] != lam:
        raise ExponentMismatch("f must live on g0's exponential line")
    s = st[1]
    numer = s - p * s[0]
    return ExpPoly({lam: numer.shift_down()})


def _f_jet(f, order, f_value, z, precision_bits):
    """Resolve (jet coefficients, f(z)) for ExpPoly or jet input."""
    if isinstance(f, ExpPoly):
        jet = f.taylor(order)
        fz = f.eval(z, precision_bits) if f_value is None else f_value
        return jet, fz
    if isinstance(f, TruncatedTaylor):
        if f.valid_order < order:
            raise PrecisionExhausted(
                f"need jet order {order}, have {f.valid_order}"
            )
        if f_value is None and not _exact_zero(z):
            raise ValueError("jet input needs an externally supplied f(z)")
        return f.truncate(order), f_value
    raise TypeError(f"unsupported function carrier {type(f).__name__}")


def shift_T(ctx, f, z, order, f_value=None, precision_bits=DEFAULT_PRECISION):
    """Jet of T_z(f) to the given order.  T_0 is the identity."""
    if _exact_zero(z):
        jet, _ = _f_jet(f, order, f_value, z, precision_bits)
        return jet
    jet, fz = _f_jet(f, max(order - 1, 0), f_value, z, precision_bits)
    g = ctx.g0_coeffs(order)
    g0z = ctx.g0_value(z, precision_bits)
    zfz = z * fz
    numer = [
        (jet.coeffs[m - 1] * g0z if m >= 1 else QI_ZERO) - zfz * g[m]
        for m in range(order + 1)
    ]
    return series_div_linear(TruncatedTaylor(numer), z)


def shift_Ttilde(ctx, f, z, order, f_value=None, precision_bits=DEFAULT_PRECISION):
    """Jet of T~_z(f).  At z = 0 this is exactly one application of D."""
    if _exact_zero(z):
        jet, _ = _f_jet(f, order + 1, f_value, z, precision_bits)
        return pommiez(ctx, jet)
    jet, fz = _f_jet(f, order, f_value, z, precision_bits)
    g = ctx.g0_coeffs(order)
    g0z = ctx.g0_value(z, precision_bits)
    numer = [jet.coeffs[m] * g0z - fz * g[m] for m in range(order + 1)]
    return series_div_linear(TruncatedTaylor(numer), z)


def pommiez_at(f, z, order, f_value=None, precision_bits=DEFAULT_PRECISION):
    """Jet of the plain divided difference D_z(f) = (f(t) - f(z))/(t - z)."""
    if _exact_zero(z):
        jet, _ = _f_jet(f, order + 1, f_value, z, precision_bits)
        numer = TruncatedTaylor((QI_ZERO,) + jet.coeffs[1:])
        return series_div_linear(numer, z)
    jet, fz = _f_jet(f, order, f_value, z, precision_bits)
    coeffs = list(jet.coeffs)
    coeffs[0] = coeffs[0] - fz
    return series_div_linear(TruncatedTaylor(coeffs), z)


def shift_T_eval(ctx, f, z, t, precision_bits=DEFAULT_PRECISION):
    """Pointwise T_z(f)(t), including the removable diagonal t = z.

    On the diagonal the quotient limit is
    z g0(z) f'(z) - z f(z) g0'(z) + f(z) g0(z); off it the closed formula
    is evaluated directly, so no jet order enters at all.
    """
    if t == z:
        fz = f.eval(z, precision_bits)
        dfz = f.derivative().eval(z, precision_bits)
        g0z = ctx.g0_value(z, precision_bits)
        dg0z = ctx.g0.derivative().eval(z, precision_bits)
        return z * g0z * dfz - z * fz * dg0z + fz * g0z
    num = t * f.eval(t, precision_bits) * ctx.g0_value(z, precision_bits) - z * f.eval(
        z, precision_bits
    ) * ctx.g0_value(t, precision_bits)
    return num / (t - z)


def shift_Ttilde_eval(ctx, f, z, t, precision_bits=DEFAULT_PRECISION):
    """Pointwise T~_z(f)(t) with the diagonal limit f'(z)g0(z) - f(z)g0'(z)."""
    if t == z:
        fz = f.eval(z, precision_bits)
        dfz = f.derivative().eval(z, precision_bits)
        g0z = ctx.g0_value(z, precision_bits)
        dg0z = ctx.g0.derivative().eval(z, precision_bits)
        return dfz * g0z - fz * dg0z
    num = f.eval(t, precision_bits) * ctx.g0_value(z, precision_bits) - f.eval(
        z, precision_bits
    ) * ctx.g0_value(t, precision_bits)
    return num / (t - z)


def mult_M(f):
    """Multiplication by the independent variable; exact on both carriers."""
    if isinstance(f, ExpPoly):
        return f.mul_by_z()
    if isinstance(f, TruncatedTaylor):
        return f.shift_up()
    raise TypeError(f"unsupported function carrier {type(f).__name__}")


def orbit(ctx, f, length, mode="exact", order=None):
    """[f, D f, ..., D^length f] in the requested representation."""
    if mode == "exact":
        if not isinstance(f, ExpPoly):
            raise TypeError("exact orbits need ExpPoly input")
        out = [f]
        for _ in range(length):
            out.append(pommiez_exact_on_line(ctx, out[-1]))
        return out
    if mode == "taylor":
        if isinstance(f, ExpPoly):
            f = f.taylor(order if order is not None else length + 4)
        if f.valid_order < length:
            raise PrecisionExhausted(
                f"orbit of length {length} needs jet order >= {length}"
            )
        out = [f]
        for _ in range(length):
            out.append(pommiez(ctx, out[-1]))
        return out
    raise ValueError(f"unknown orbit mode {mode!r}")


def phi_n_coefficients(ctx, n):
    return ctx.phi_coefficients(n)


def apply_phi(ctx, n, jet):
    """phi_n applied to a jet: sum_k gamma_k * k! * c_k."""
    gammas = ctx.phi_coefficients(n)
    if jet.valid_order < n:
        raise PrecisionExhausted(f"phi_{n} needs jet order >= {n}")
    total = QI_ZERO
    for k, gamma in enumerate(gammas):
        total = total + gamma * factorial(k) * jet.coeffs[k]
    return total


class PommiezQuotient:
    """h(t)/t for an exponential polynomial h with h(0) = 0.

    This is the carrier for D-images of exponential polynomials that leave
    the class only through the removable 1/t factor; it provides the same
    eval/taylor_at surface as ExpPoly, so the commutant machinery accepts it.
    """

    __slots__ = ("numer",)

    def __init__(self, numer):
        if not numer.constant_term() == QI_ZERO:
            raise SingularAtZero("numerator must vanish at 0")
        object.__setattr__(self, "numer", numer)

    def __setattr__(self, name, value):
        raise AttributeError("PommiezQuotient is immutable")

    def eval(self, z, precision_bits=DEFAULT_PRECISION):
        if _exact_zero(z):
            return self.numer.derivative().constant_term()
        return self.numer.eval(z, precision_bits) / z

    def taylor(self, order):
        return series_div_linear(self.numer.taylor(order + 1), QI_ZERO)

    def taylor_at(self, point, order, precision_bits=DEFAULT_PRECISION):
        if _exact_zero(point):
            return self.taylor(order)
        jet = self.numer.taylor_at(point, order, precision_bits)
        return TruncatedTaylor(_div_by_c_plus_t(jet.coeffs, point))


def pommiez_image(ctx, f):
    """D(f) as a PommiezQuotient, for arbitrary exponential-polynomial f."""
    numer = f - ExpPoly([(lam, p * f.constant_term()) for lam, p in ctx.g0.terms.items()])
    return PommiezQuotient(numer)
