"""Scalar arithmetic: exact Gaussian rationals and arbitrary-precision complex floats.

``GaussRational`` is the exact scalar every symbolic structure is built on;
``BigComplex`` is the numeric scalar used whenever transcendental values
(exponentials, roots) enter.  Mixed arithmetic coerces the exact operand to
the float operand's precision, and two floats combine at the *minimum* of
their precisions, so precision never silently improves along a pipeline.
"""

from __future__ import annotations

import re as _re
from fractions import Fraction

import mpmath

MIN_PRECISION = 64
DEFAULT_PRECISION = 128

_RATIONAL_COMPLEX_RE = _re.compile(r"^(-?\d+)/(\d+)\+(-?\d+)/(\d+)i$")


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot build a rational from {type(x).__name__}")


class GaussRational:
    """A Gaussian rational re + im*i with exact Fraction components.

    Values are immutable and normalized (Fraction keeps numerator/denominator
    coprime with a positive denominator), so equality and hashing are exact
    structural operations.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", _as_fraction(re))
        object.__setattr__(self, "im", _as_fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussRational is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_string(cls, text):
        """Parse the canonical form ``p/q+r/si`` (signs on numerators)."""
        m = _RATIONAL_COMPLEX_RE.match(text.strip())
        if m is None:
            raise ValueError(f"not a rational-complex literal: {text!r}")
        p, q, r, s = (int(g) for g in m.groups())
        return cls(Fraction(p, q), Fraction(r, s))

    # -- predicates ----------------------------------------------------

    def is_zero(self):
        return not self.re and not self.im

    def is_real(self):
        return not self.im

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GaussRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussRational(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussRational(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if not d:
            raise ZeroDivisionError("division by zero GaussRational")
        return GaussRational(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = GaussRational(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    # -- comparisons / hashing ------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return not self.is_zero()

    # -- conversions ----------------------------------------------------

    def to_big(self, precision_bits=DEFAULT_PRECISION):
        return BigComplex.from_rational(self, precision_bits)

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def serialize(self):
        """Canonical ``p/q+r/si`` string, lowest terms, signs on numerators."""
        return (
            f"{self.re.numerator}/{self.re.denominator}"
            f"+{self.im.numerator}/{self.im.denominator}i"
        )

    def __str__(self):
        return self.serialize()

    def __repr__(self):
        return f"GaussRational({self.re!r}, {self.im!r})"


QI_ZERO = GaussRational(0)
QI_ONE = GaussRational(1)
QI_I = GaussRational(0, 1)


def _mpf_to_hex(x):
    """Lossless integer-mantissa hex form, e.g. '0x3p-1' for 1.5."""
    if not isinstance(x, mpmath.mpf):
        raise TypeError("hex serialization expects an mpf")
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return "0x0p+0"
    return f"{'-' if sign else ''}0x{man:x}p{exp:+d}"


_HEXFLOAT_RE = _re.compile(r"^(-?)0x([0-9a-f]+)p([+-]\d+)$")


def _hex_to_mpf(text):
    m = _HEXFLOAT_RE.match(text.strip())
    if m is None:
        raise ValueError(f"not a hex float: {text!r}")
    sign, man, exp = m.groups()
    man_int = int(man, 16)
    with mpmath.workprec(max(man_int.bit_length() + 8, MIN_PRECISION)):
        value = mpmath.ldexp(mpmath.mpf(man_int), int(exp))
    return -value if sign == "-" else value


class BigComplex:
    """Arbitrary-precision complex float that carries its own precision.

    The components are mpmath floats; ``precision_bits`` records the working
    precision the value was produced at.  Binary operations run at the
    minimum precision of their operands.
    """

    __slots__ = ("re", "im", "precision_bits")

    def __init__(self, re, im=0, precision_bits=DEFAULT_PRECISION):
        if precision_bits < MIN_PRECISION:
            raise ValueError(f"precision_bits must be >= {MIN_PRECISION}")
        with mpmath.workprec(precision_bits):
            object.__setattr__(self, "re", mpmath.mpf(re))
            object.__setattr__(self, "im", mpmath.mpf(im))
        object.__setattr__(self, "precision_bits", precision_bits)

    def __setattr__(self, name, value):
        raise AttributeError("BigComplex is immutable")

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_rational(cls, q, precision_bits=DEFAULT_PRECISION):
        q = q if isinstance(q, GaussRational) else GaussRational(q)
        with mpmath.workprec(precision_bits):
            re = mpmath.mpf(q.re.numerator) / q.re.denominator
            im = mpmath.mpf(q.im.numerator) / q.im.denominator
        return cls._raw(re, im, precision_bits)

    @classmethod
    def _raw(cls, re, im, precision_bits):
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        object.__setattr__(obj, "precision_bits", precision_bits)
        return obj

    @classmethod
    def from_mpc(cls, z, precision_bits):
        # component access must not re-round through the global context
        if isinstance(z, mpmath.mpc):
            return cls._raw(z.real, z.imag, precision_bits)
        with mpmath.workprec(precision_bits):
            return cls._raw(mpmath.mpf(z), mpmath.mpf(0), precision_bits)

    # -- helpers ----------------------------------------------------------

    def mpc(self):
        return mpmath.mpc(self.re, self.im)

    def _coerce(self, other):
        """Return (other as BigComplex, common precision) or None."""
        if isinstance(other, BigComplex):
            return other, min(self.precision_bits, other.precision_bits)
        if isinstance(other, (int, Fraction, GaussRational)):
            q = other if isinstance(other, GaussRational) else GaussRational(other)
            return BigComplex.from_rational(q, self.precision_bits), self.precision_bits
        return None

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            return BigComplex._raw(self.re + o.re, self.im + o.im, prec)

    __radd__ = __add__

    def __sub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            return BigComplex._raw(self.re - o.re, self.im - o.im, prec)

    def __rsub__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            return BigComplex._raw(o.re - self.re, o.im - self.im, prec)

    def __mul__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            z = self.mpc() * o.mpc()
        return BigComplex.from_mpc(z, prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            z = self.mpc() / o.mpc()
        return BigComplex.from_mpc(z, prec)

    def __rtruediv__(self, other):
        co = self._coerce(other)
        if co is None:
            return NotImplemented
        o, prec = co
        with mpmath.workprec(prec):
            z = o.mpc() / self.mpc()
        return BigComplex.from_mpc(z, prec)

    def __neg__(self):
        # mpf negation rounds at the ambient context precision
        with mpmath.workprec(self.precision_bits):
            return BigComplex._raw(-self.re, -self.im, self.precision_bits)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        out = BigComplex.from_rational(QI_ONE, self.precision_bits)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conjugate(self):
        with mpmath.workprec(self.precision_bits):
            return BigComplex._raw(self.re, -self.im, self.precision_bits)

    def exp(self):
        with mpmath.workprec(self.precision_bits):
            z = mpmath.exp(self.mpc())
        return BigComplex.from_mpc(z, self.precision_bits)

    def abs(self):
        with mpmath.workprec(self.precision_bits):
            return mpmath.hypot(self.re, self.im)

    def __abs__(self):
        return self.abs()

    # -- comparisons ------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, BigComplex):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, GaussRational)):
            q = other if isinstance(other, GaussRational) else GaussRational(other)
            return self.re == q.re and self.im == q.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_zero(self):
        return not self

    # -- conversions -------------------------------------------------------

    def to_complex(self):
        return complex(self.re) + 1j * complex(self.im)

    def serialize(self):
        """Hex-float components with a precision annotation."""
        return {
            "re": _mpf_to_hex(self.re),
            "im": _mpf_to_hex(self.im),
            "precision": self.precision_bits,
        }

    @classmethod
    def deserialize(cls, doc):
        return cls._raw(_hex_to_mpf(doc["re"]), _hex_to_mpf(doc["im"]), int(doc["precision"]))

    def __str__(self):
        with mpmath.workprec(self.precision_bits):
            return f"{mpmath.nstr(self.re, 20)}{'+' if self.im >= 0 else ''}{mpmath.nstr(self.im, 20)}i"

    def __repr__(self):
        return f"BigComplex({self.re!r}, {self.im!r}, {self.precision_bits})"


def as_big(x, precision_bits=DEFAULT_PRECISION):
    """Coerce an int/Fraction/GaussRational/BigComplex to BigComplex."""
    if isinstance(x, BigComplex):
        return x
    if isinstance(x, (int, Fraction)):
        return BigComplex.from_rational(GaussRational(x), precision_bits)
    if isinstance(x, GaussRational):
        return BigComplex.from_rational(x, precision_bits)
    raise TypeError(f"cannot coerce {type(x).__name__} to BigComplex")


def exp_scalar(x, precision_bits=DEFAULT_PRECISION):
    """exp(x), staying exact when x == 0 (the only exactly representable case)."""
    if isinstance(x, GaussRational) and x.is_zero():
        return QI_ONE
    if isinstance(x, (int, Fraction)) and x == 0:
        return QI_ONE
    return as_big(x, precision_bits).exp()


def scalar_abs_upper(x, precision_bits=DEFAULT_PRECISION):
    """An mpf upper bound for |x| (exact conversion then 1-ulp slack)."""
    b = as_big(x, precision_bits)
    with mpmath.workprec(precision_bits):
        return mpmath.hypot(b.re, b.im) * (1 + mpmath.mpf(2) ** (8 - precision_bits))


def is_exact(x):
    return isinstance(x, (int, Fraction, GaussRational))
