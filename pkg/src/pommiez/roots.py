"""Certified complex root isolation via Aberth-Ehrlich simultaneous iteration.

Each returned root carries an inclusion radius deg * |p(r)/p'(r)|: the disk
of that radius around r contains at least one true root (the bound follows
from p'/p = sum 1/(r - root_i)).  Multiple roots appear as clusters of
simple approximations; a merging pass groups roots whose disks overlap and
reports every member at the cluster center with the cluster radius.
"""

from __future__ import annotations

import mpmath

from .errors import NonConvergence
from .poly import Poly, _is_zero_scalar
from .scalar import BigComplex, as_big

_GUARD_BITS = 32
_MAX_ROUNDS = 120


def _poly_to_mpc(p, prec):
    with mpmath.workprec(prec):
        return [as_big(c, prec).mpc() for c in p.coeffs]


def _horner_pair(coeffs, z):
    """Evaluate p and p' at z simultaneously."""
    pv = mpmath.mpc(0)
    dv = mpmath.mpc(0)
    for c in reversed(coeffs):
        dv = dv * z + pv
        pv = pv * z + c
    return pv, dv


def poly_roots(p, precision_bits=128):
    """All deg(p) roots with multiplicity, as (BigComplex, radius) pairs.

    Raises NonConvergence when the a posteriori radii fail the
    certification bound after the iteration cap; callers should retry
    with doubled precision.
    """
    if not isinstance(p, Poly):
        p = Poly(p)
    if p.is_zero() or p.degree < 1:
        raise ValueError("poly_roots requires a nonzero polynomial of degree >= 1")

    # exact zero roots come off for free
    k = 0
    while k < len(p.coeffs) and _is_zero_scalar(p.coeffs[k]):
        k += 1
    zero = BigComplex(0, 0, precision_bits)
    results = [(zero, mpmath.mpf(0)) for _ in range(k)]
    reduced = Poly(p.coeffs[k:])
    d = reduced.degree
    if d == 0:
        return results

    wp = precision_bits + _GUARD_BITS
    with mpmath.workprec(wp):
        coeffs = _poly_to_mpc(reduced, wp)
        if d == 1:
            root = -coeffs[0] / coeffs[1]
            pv, dv = _horner_pair(coeffs, root)
            rad = abs(pv / dv) if dv != 0 else mpmath.mpf(0)
            results.append((BigComplex.from_mpc(root, precision_bits), rad))
            return results

        # perturbed unit-circle initial points
        pts = []
        for j in range(d):
            theta = 2 * mpmath.pi * j / d + mpmath.mpf("0.77") / d
            r = 1 + mpmath.mpf(j + 1) / (1 << 10)
            pts.append(r * mpmath.mpc(mpmath.cos(theta), mpmath.sin(theta)))

        stop = mpmath.mpf(2) ** (-(precision_bits + _GUARD_BITS // 2))
        for _ in range(_MAX_ROUNDS):
            max_step = mpmath.mpf(0)
            new_pts = list(pts)
            for j in range(d):
                zj = pts[j]
                pv, dv = _horner_pair(coeffs, zj)
                if pv == 0:
                    continue
                if dv == 0:
                    new_pts[j] = zj * (1 + mpmath.mpf(2) ** (-precision_bits // 2))
                    max_step = mpmath.mpf(1)
                    continue
                nw = pv / dv
                s = mpmath.mpc(0)
                for i in range(d):
                    if i != j:
                        diff = zj - pts[i]
                        if diff == 0:
                            diff = mpmath.mpf(2) ** (-wp // 2)
                        s += 1 / diff
                denom = 1 - nw * s
                corr = nw if denom == 0 else nw / denom
                new_pts[j] = zj - corr
                step = abs(corr) / (1 + abs(zj))
                if step > max_step:
                    max_step = step
            pts = new_pts
            if max_step < stop:
                break

        # a posteriori certification; the residual is floored by the Horner
        # rounding bound so that clustered (multiple) roots get radii that
        # honestly cover the evaluation noise
        cert = mpmath.mpf(2) ** (-(precision_bits // 4))
        eps = mpmath.mpf(2) ** (4 - wp)
        raw = []
        for zj in pts:
            pv, dv = _horner_pair(coeffs, zj)
            if dv == 0:
                raise NonConvergence("derivative vanished at an approximate root")
            az = abs(zj)
            err = mpmath.mpf(0)
            zp = mpmath.mpf(1)
            for c in coeffs:
                err += abs(c) * zp
                zp *= az
            rad = d * (abs(pv) + eps * err) / abs(dv)
            if not rad <= cert * (1 + az):
                raise NonConvergence(
                    f"root radius {mpmath.nstr(rad, 5)} exceeds certification bound"
                )
            raw.append((zj, rad))

        # merge clusters of overlapping disks (multiple-root reporting)
        parent = list(range(d))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        # inflate disks slightly for the overlap test: cluster members of an
        # m-fold root straddle the true root, so disks can *touch* rather
        # than overlap
        for i in range(d):
            for j in range(i + 1, d):
                if abs(raw[i][0] - raw[j][0]) <= 4 * (raw[i][1] + raw[j][1]):
                    parent[find(i)] = find(j)

        groups = {}
        for i in range(d):
            groups.setdefault(find(i), []).append(i)
        for members in groups.values():
            center = sum(raw[i][0] for i in members) / len(members)
            radius = max(abs(raw[i][0] - center) + raw[i][1] for i in members)
            bc = BigComplex.from_mpc(center, precision_bits)
            for _ in members:
                results.append((bc, radius))
    return results
