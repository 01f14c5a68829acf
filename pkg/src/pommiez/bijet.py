"""Bivariate helpers for two-variable shift kernels F(t, z) = T_z(f)(t).

Two carriers:

* ``BiPoly`` -- exact bivariate polynomials (used when f and g0 are plain
  polynomials, where T_z(f)(t) is itself a polynomial in both variables).
* total-degree-truncated bivariate jets (plain ragged lists) -- used to read
  mixed partials of F at arbitrary base points, including on the diagonal
  t = z, where the (t - z) division is performed in sheared coordinates
  w = u - v so the removable singularity cancels instead of being limited.

Total-degree truncation is exact under the linear substitutions used here,
so a jet of total order M has every coefficient of total degree <= M exact
(up to scalar rounding in numeric mode).
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .errors import NonConvergence
from .funcspace import ExpPoly, factorial
from .poly import Poly, _is_zero_scalar
from .scalar import DEFAULT_PRECISION, GaussRational, QI_ZERO, as_big, is_exact


# ---------------------------------------------------------------------------
# exact bivariate polynomials


class BiPoly:
    """rows[i] is the Poly-in-z coefficient of t^i."""

    __slots__ = ("rows",)

    def __init__(self, rows=()):
        rs = [r if isinstance(r, Poly) else Poly(r) for r in rows]
        while rs and rs[-1].is_zero():
            rs.pop()
        object.__setattr__(self, "rows", tuple(rs))

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    @classmethod
    def from_t_poly(cls, p):
        return cls([Poly.constant(c) for c in p.coeffs])

    @classmethod
    def from_z_poly(cls, p):
        return cls([p])

    def t_degree(self):
        return len(self.rows) - 1

    def row(self, i):
        if 0 <= i < len(self.rows):
            return self.rows[i]
        return Poly()

    def __add__(self, other):
        n = max(len(self.rows), len(other.rows))
        return BiPoly([self.row(i) + other.row(i) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.rows), len(other.rows))
        return BiPoly([self.row(i) - other.row(i) for i in range(n)])

    def __mul__(self, other):
        if isinstance(other, BiPoly):
            if not self.rows or not other.rows:
                return BiPoly()
            out = [Poly() for _ in range(len(self.rows) + len(other.rows) - 1)]
            for i, r in enumerate(self.rows):
                if r.is_zero():
                    continue
                for j, s in enumerate(other.rows):
                    out[i + j] = out[i + j] + r * s
            return BiPoly(out)
        return BiPoly([r * other for r in self.rows])

    def __rmul__(self, other):
        return BiPoly([other * r for r in self.rows])

    def shift_t(self):
        """Multiply by t."""
        return BiPoly((Poly(),) + self.rows)

    def eval(self, t, z):
        acc = QI_ZERO
        tp = None
        for i, r in enumerate(self.rows):
            v = r.eval(z)
            tp = (tp * t) if i else None
            acc = acc + v * (t**i if isinstance(t, (int, Fraction)) else _power(t, i))
        return acc

    def divide_by_t_minus_z(self):
        """Exact quotient N / (t - z) for N vanishing on the diagonal."""
        if not self.rows:
            return BiPoly()
        d = len(self.rows) - 1
        q = [Poly()] * d
        carry = Poly()
        for m in range(d, 0, -1):
            q[m - 1] = self.row(m) + (carry.shift_up() if not carry.is_zero() else Poly())
            carry = q[m - 1]
        remainder = self.row(0) + carry.shift_up()
        if not remainder.is_zero():
            raise ValueError("numerator does not vanish on t = z")
        return BiPoly(q)

    def contract_t(self, weights):
        """sum_k weights[k] * k! * [t^k]-row, a Poly in z."""
        out = Poly()
        for k, w in enumerate(weights):
            out = out + w * factorial(k) * self.row(k)
        return out

    def contract_z(self, weights):
        """Same along z, producing a Poly in t."""
        max_t = len(self.rows)
        cols = []
        for k, w in enumerate(weights):
            col = Poly([self.row(i)[k] for i in range(max_t)])
            cols.append(w * factorial(k) * col)
        out = Poly()
        for c in cols:
            out = out + c
        return out


def _power(x, n):
    out = None
    for _ in range(n):
        out = x if out is None else out * x
    return out if out is not None else 1


def shift_T_bipoly(ctx, f):
    """Exact BiPoly of T_z(f)(t) for polynomial f (and polynomial g0)."""
    if isinstance(f, ExpPoly):
        if not f.is_polynomial():
            raise ValueError("exact bivariate kernel needs polynomial f")
        f = f.terms.get(GaussRational(0), Poly())
    if not ctx.g0.is_polynomial():
        raise ValueError("exact bivariate kernel needs polynomial g0")
    g = ctx.g0.terms.get(GaussRational(0), Poly())
    ft = BiPoly.from_t_poly(f)
    gz = BiPoly.from_z_poly(g)
    fz = BiPoly.from_z_poly(f)
    gt = BiPoly.from_t_poly(g)
    z_factor = BiPoly.from_z_poly(Poly.x())
    numer = ft.shift_t() * gz - z_factor * fz * gt
    return numer.divide_by_t_minus_z()


# ---------------------------------------------------------------------------
# truncated bivariate jets (ragged lists, total degree <= M)


def bj_zero(m):
    return [[QI_ZERO] * (m + 1 - a) for a in range(m + 1)]


def bj_total_order(bj):
    return len(bj) - 1


def bj_add(x, y):
    m = min(bj_total_order(x), bj_total_order(y))
    return [
        [x[a][b] + y[a][b] for b in range(m + 1 - a)]
        for a in range(m + 1)
    ]


def bj_sub(x, y):
    m = min(bj_total_order(x), bj_total_order(y))
    return [
        [x[a][b] - y[a][b] for b in range(m + 1 - a)]
        for a in range(m + 1)
    ]


def bj_scale(x, c):
    return [[c * v for v in row] for row in x]


def bj_mul(x, y, m=None):
    mx, my = bj_total_order(x), bj_total_order(y)
    if m is None:
        m = min(mx, my)
    out = bj_zero(m)
    for a1 in range(min(mx, m) + 1):
        row = x[a1]
        for b1 in range(min(len(row), m + 1 - a1)):
            c1 = row[b1]
            if _is_zero_scalar(c1):
                continue
            rem = m - a1 - b1
            for a2 in range(min(my, rem) + 1):
                row2 = y[a2]
                for b2 in range(min(len(row2), rem - a2 + 1)):
                    c2 = row2[b2]
                    if _is_zero_scalar(c2):
                        continue
                    out[a1 + a2][b1 + b2] = out[a1 + a2][b1 + b2] + c1 * c2
    return out


def bj_from_u_jet(coeffs, m):
    out = bj_zero(m)
    for a, c in enumerate(coeffs[: m + 1]):
        out[a][0] = c
    return out


def bj_from_v_jet(coeffs, m):
    out = bj_zero(m)
    for b, c in enumerate(coeffs[: m + 1]):
        out[0][b] = c
    return out


def bj_from_sum_jet(coeffs, m):
    """Series in s = u + v, expanded binomially into the (u, v) grid."""
    out = bj_zero(m)
    for deg, c in enumerate(coeffs[: m + 1]):
        if _is_zero_scalar(c):
            continue
        for a in range(deg + 1):
            out[a][deg - a] = out[a][deg - a] + c * comb(deg, a)
    return out


def bj_const(c, m):
    out = bj_zero(m)
    out[0][0] = c
    return out


def bj_drop_u(bj, tol=None):
    """Divide by u; the u^0 column must vanish (to tol in numeric mode)."""
    m = bj_total_order(bj)
    for b, c in enumerate(bj[0]):
        if is_exact(c):
            if not _is_zero_scalar(c):
                raise NonConvergence("diagonal kernel did not cancel exactly")
        elif tol is not None and not abs(as_big(c)) <= tol:
            raise NonConvergence("diagonal kernel residue above tolerance")
    return [bj[a + 1][: m - a] for a in range(m)]


def bj_subst_w_to_u_minus_v(bj):
    """Rewrite a jet in (w, v) as a jet in (u, v) via w = u - v."""
    m = bj_total_order(bj)
    out = bj_zero(m)
    for a in range(m + 1):
        for b in range(m + 1 - a):
            c = bj[a][b]
            if _is_zero_scalar(c):
                continue
            for k in range(a + 1):
                sign = 1 if (a - k) % 2 == 0 else -1
                out[k][b + a - k] = out[k][b + a - k] + c * (sign * comb(a, k))
    return out


def bj_inverse_linear(c0, m):
    """Jet of 1/(c0 + (u - v)) to total order m, c0 != 0."""
    diff = bj_zero(m)
    if m >= 1:
        diff[1][0] = diff[1][0] + 1
        diff[0][1] = diff[0][1] - 1
    out = bj_const(1 / c0, m)
    power = bj_const(GaussRational(1), m)
    inv_c = 1 / c0
    sign = 1
    for i in range(1, m + 1):
        power = bj_mul(power, diff, m)
        sign = -sign
        inv_c = inv_c / c0
        term = bj_scale(power, sign * inv_c)
        out = bj_add(out, term)
    return out


def shift_T_bijet(ctx, f, t0, z0, ju, jv, precision_bits=DEFAULT_PRECISION, tol=None):
    """Jet of F(t0 + u, z0 + v), F(t, z) = T_z(f)(t), through u^ju v^jv.

    Off the diagonal the (t - z) factor is inverted as a unit power series;
    on the diagonal (t0 == z0) the numerator is expanded in sheared
    coordinates (w, v) = (u - v, v), divided exactly by w, and sheared back.
    """
    m = ju + jv
    diagonal = t0 == z0
    build = m + 1

    if diagonal:
        # t = t0 + w + v, z = z0 + v
        f_s = f.taylor_at(t0, build, precision_bits).coeffs
        g_s = ctx.g0.taylor_at(t0, build, precision_bits).coeffs
        f_v = f.taylor_at(z0, build, precision_bits).coeffs
        g_v = ctx.g0.taylor_at(z0, build, precision_bits).coeffs
        f_tw = bj_from_sum_jet(f_s, build)
        g_tw = bj_from_sum_jet(g_s, build)
        f_zv = bj_from_v_jet(f_v, build)
        g_zv = bj_from_v_jet(g_v, build)
        t_lin = bj_const(t0, build)
        t_lin[1][0] = t_lin[1][0] + 1
        t_lin[0][1] = t_lin[0][1] + 1
        z_lin = bj_const(z0, build)
        z_lin[0][1] = z_lin[0][1] + 1
        numer = bj_sub(
            bj_mul(bj_mul(t_lin, f_tw, build), g_zv, build),
            bj_mul(bj_mul(z_lin, f_zv, build), g_tw, build),
        )
        quotient_wv = bj_drop_u(numer, tol)
        return bj_subst_w_to_u_minus_v(quotient_wv)

    f_u = f.taylor_at(t0, build, precision_bits).coeffs
    g_u = ctx.g0.taylor_at(t0, build, precision_bits).coeffs
    f_v = f.taylor_at(z0, build, precision_bits).coeffs
    g_v = ctx.g0.taylor_at(z0, build, precision_bits).coeffs
    f_t = bj_from_u_jet(f_u, build)
    g_t = bj_from_u_jet(g_u, build)
    f_z = bj_from_v_jet(f_v, build)
    g_z = bj_from_v_jet(g_v, build)
    t_lin = bj_const(t0, build)
    t_lin[1][0] = t_lin[1][0] + 1
    z_lin = bj_const(z0, build)
    z_lin[0][1] = z_lin[0][1] + 1
    numer = bj_sub(
        bj_mul(bj_mul(t_lin, f_t, build), g_z, build),
        bj_mul(bj_mul(z_lin, f_z, build), g_t, build),
    )
    inv = bj_inverse_linear(t0 - z0, build)
    return bj_mul(numer, inv, build)


def bj_mixed_partial(bj, j, k):
    """d^j/dt^j d^k/dz^k value at the base point: j! k! * coeff."""
    return factorial(j) * factorial(k) * bj[j][k]
