"""Convex polygon sequences, support functions and growth weights.

The geometry is exact: polygons have Gaussian-rational vertices, and
containment/orientation tests use exact cross products.  Boundary points
count as inside (the polygons model compact sets).  The weight diagnostic
``condition1_sample`` is numeric by design and is excluded from the exact
acceptance gates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import StrictNestingViolated
from .scalar import BigComplex, GaussRational


def _cross(o, a, b):
    """Orientation of the turn o->a->b: positive for counterclockwise."""
    return (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)


class ConvexPolygon:
    """Convex polygon with counterclockwise Gaussian-rational vertices."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        vs = tuple(
            v if isinstance(v, GaussRational) else GaussRational(*v) if isinstance(v, tuple) else GaussRational(v)
            for v in vertices
        )
        if len(vs) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        n = len(vs)
        for i in range(n):
            turn = _cross(vs[i], vs[(i + 1) % n], vs[(i + 2) % n])
            if turn <= 0:
                raise ValueError("vertices must be strictly convex and counterclockwise")
        object.__setattr__(self, "vertices", vs)

    def __setattr__(self, name, value):
        raise AttributeError("ConvexPolygon is immutable")

    @classmethod
    def square(cls, half_side, center=GaussRational(0)):
        h = Fraction(half_side)
        c = center
        return cls(
            [
                GaussRational(c.re - h, c.im - h),
                GaussRational(c.re + h, c.im - h),
                GaussRational(c.re + h, c.im + h),
                GaussRational(c.re - h, c.im + h),
            ]
        )

    def contains(self, q):
        """Exact point-in-polygon; boundary points count as inside."""
        n = len(self.vertices)
        for i in range(n):
            if _cross(self.vertices[i], self.vertices[(i + 1) % n], q) < 0:
                return False
        return True

    def contains_strictly(self, q):
        n = len(self.vertices)
        return all(
            _cross(self.vertices[i], self.vertices[(i + 1) % n], q) > 0
            for i in range(n)
        )

    def contains_polygon(self, other, strict=False):
        test = self.contains_strictly if strict else self.contains
        return all(test(v) for v in other.vertices)

    def __repr__(self):
        return f"ConvexPolygon({[str(v) for v in self.vertices]})"


def support_function(polygon, z):
    """H(z) = sup over the polygon of Re(t * z); attained at a vertex.

    Exact (a Fraction) for GaussRational z, numeric otherwise.
    """
    if isinstance(z, BigComplex):
        values = [
            float(v.re.numerator) / float(v.re.denominator) * z.re
            - float(v.im.numerator) / float(v.im.denominator) * z.im
            for v in polygon.vertices
        ]
        return max(values)
    if isinstance(z, complex):
        return max(float(v.re) * z.real - float(v.im) * z.imag for v in polygon.vertices)
    if isinstance(z, (int, Fraction)):
        z = GaussRational(z)
    return max(v.re * z.re - v.im * z.im for v in polygon.vertices)


class ConvexRegion:
    """Increasing sequence Q_1 <= Q_2 <= ... of convex polygons with 0 in Q_1."""

    __slots__ = ("polygons",)

    def __init__(self, polygons):
        ps = tuple(polygons)
        if not ps:
            raise ValueError("a region needs at least one polygon")
        if not ps[0].contains(GaussRational(0)):
            raise ValueError("0 must belong to the first polygon")
        for i in range(len(ps) - 1):
            if not ps[i + 1].contains_polygon(ps[i]):
                raise ValueError(f"polygon {i + 1} does not contain polygon {i}")
        object.__setattr__(self, "polygons", ps)

    def __setattr__(self, name, value):
        raise AttributeError("ConvexRegion is immutable")

    def polygon(self, n):
        """1-based access matching the Q_n indexing."""
        if not 1 <= n <= len(self.polygons):
            raise IndexError(f"region has {len(self.polygons)} polygons; asked for {n}")
        return self.polygons[n - 1]

    def __len__(self):
        return len(self.polygons)


def membership_En(f, region, n):
    """Whether f's conjugate diagram (convex hull of its exponents) lies in Q_n.

    By convexity the hull is contained in Q_n iff every exponent is.
    The zero function belongs to every level.
    """
    poly = region.polygon(n)
    return all(poly.contains(lam) for lam in f.terms)


@dataclass(frozen=True)
class Weight:
    """Growth weight v_{n,k}(z) = H_{Q_n}(z) + |z|/k; positively 1-homogeneous."""

    n: int
    k: int
    region: ConvexRegion

    def eval(self, z):
        if isinstance(z, BigComplex):
            z = z.to_complex()
        elif isinstance(z, GaussRational):
            z = z.to_complex()
        h = support_function(self.region.polygon(self.n), z)
        return float(h) + abs(z) / self.k


@dataclass(frozen=True)
class Condition1Sample:
    z: complex
    left: float
    right_inf: float

    @property
    def slack(self):
        return self.left - self.right_inf


@dataclass(frozen=True)
class Condition1Report:
    n: int
    k: int
    samples: tuple
    constant: float

    def all_finite(self):
        return all(math.isfinite(s.slack) for s in self.samples)


_DISK_POINTS = 64


def condition1_sample(region, n, k, z_samples):
    """Sampled two-sided weight comparison between levels n and n+1.

    With m = n+1 and s = k, evaluates sup_{|t-z|<=1} v_{n,s}(t) + ln(1+|z|)
    against inf_{|t-z|<=1} v_{m,k}(t) at each sample z (the sup/inf taken
    over a 64-point boundary circle plus the center) and reports the minimal
    slack constant that makes every sample pass.  Diagnostic only.
    """
    if len(region) < n + 1:
        raise StrictNestingViolated(f"region needs at least {n + 1} polygons")
    inner, outer = region.polygon(n), region.polygon(n + 1)
    if not outer.contains_polygon(inner, strict=True):
        raise StrictNestingViolated(f"Q_{n} is not strictly inside Q_{n + 1}")

    w_low = Weight(n, k, region)
    w_high = Weight(n + 1, k, region)
    circle = [
        complex(math.cos(2 * math.pi * j / _DISK_POINTS), math.sin(2 * math.pi * j / _DISK_POINTS))
        for j in range(_DISK_POINTS)
    ]
    samples = []
    for z in z_samples:
        if isinstance(z, (BigComplex, GaussRational)):
            z = z.to_complex()
        pts = [z] + [z + c for c in circle]
        left = max(w_low.eval(t) for t in pts) + math.log(1 + abs(z))
        right = min(w_high.eval(t) for t in pts)
        samples.append(Condition1Sample(z, left, right))
    constant = max((s.slack for s in samples), default=0.0)
    return Condition1Report(n, k, tuple(samples), constant)
