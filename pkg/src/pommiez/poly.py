"""Dense univariate polynomials, lowest degree first.

Coefficients may be any scalar supporting the ring operations
(GaussRational, BigComplex, plain ints/Fractions); mixed coefficients
coerce through the scalar layer.  The zero polynomial is the empty
coefficient tuple.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import GaussRational, QI_ONE, QI_ZERO


def _is_zero_scalar(c):
    if isinstance(c, (int, Fraction)):
        return c == 0
    return c.is_zero()


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = list(coeffs)
        while cs and _is_zero_scalar(cs[-1]):
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def constant(cls, c):
        return cls((c,))

    @classmethod
    def monomial(cls, degree, c=QI_ONE):
        return cls((QI_ZERO,) * degree + (c,))

    @classmethod
    def x(cls):
        return cls((QI_ZERO, QI_ONE))

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return QI_ZERO

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)])

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, Poly):
            if self.is_zero() or other.is_zero():
                return Poly()
            out = [QI_ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
            for i, a in enumerate(self.coeffs):
                if _is_zero_scalar(a):
                    continue
                for j, b in enumerate(other.coeffs):
                    out[i + j] = out[i + j] + a * b
            return Poly(out)
        return Poly([c * other for c in self.coeffs])

    def __rmul__(self, other):
        return Poly([other * c for c in self.coeffs])

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = Poly.constant(QI_ONE)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift_up(self, k=1):
        """Multiply by z^k."""
        if self.is_zero():
            return self
        return Poly((QI_ZERO,) * k + self.coeffs)

    def shift_down(self):
        """Divide by z; requires an exactly vanishing constant term."""
        if self.is_zero():
            return self
        if not _is_zero_scalar(self.coeffs[0]):
            raise ValueError("constant term nonzero; not divisible by z")
        return Poly(self.coeffs[1:])

    def taylor_shift(self, a):
        """Compose with z -> z + a (exact Horner-style shift)."""
        out = Poly()
        for c in reversed(self.coeffs):
            # out = out*(z+a) + c
            shifted = out.shift_up() + out * a + Poly.constant(c)
            out = shifted
        return out

    # -- calculus --------------------------------------------------------

    def derivative(self):
        if len(self.coeffs) <= 1:
            return Poly()
        return Poly([k * c for k, c in enumerate(self.coeffs) if k >= 1])

    def eval(self, z):
        """Horner evaluation; exact over exact scalars."""
        acc = None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * z + c
        if acc is None:
            return QI_ZERO
        return acc

    def abs_coeff_poly(self, precision_bits=128):
        """Poly over mpf with |c_k| coefficients (for crude majorants)."""
        from .scalar import scalar_abs_upper

        return [scalar_abs_upper(c, precision_bits) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


def poly_eval(p, z):
    """Evaluate p at z (Horner)."""
    return p.eval(z)


def poly_derivative(p):
    """Formal derivative; the derivative of a constant is the zero polynomial."""
    return p.derivative()
