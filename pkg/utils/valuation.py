# ThetaBlocks, AGPL-3.0 license
"""
Valuations of series as convex hulls of their supports in the (n, r) plane.

A Jacobi-type series gets the hull of its support plus the recession ray {(s, 0): s >= 0}, a Laurent polynomial the
plain hull. Both are multiplicative: the hull of a product is the Minkowski sum of the hulls.
"""

from dataclasses import dataclass
from fractions import Fraction

from models.common import SeriesError


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _chain(pts):
    # one monotone chain of pts sorted by (r, n), collinear points dropped
    out = []
    for p in pts:
        while len(out) > 1 and _cross(out[-2], out[-1], p) <= 0:
            out.pop()
        out.append(p)
    return out


@dataclass(frozen=True)
class SupportHull:
    # extreme points (n, r) sorted by (r, n); recession marks the ray {(s, 0): s >= 0}
    points: tuple
    recession: bool = True

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def below(self, nmax):
        # extreme points with n <= nmax, the part a truncated support determines
        return tuple(p for p in self.points if p[0] <= nmax)

    def __str__(self):
        s = ", ".join(f"({n}, {r})" for n, r in self.points)
        return f"conv{{{s}}}" + (" + ray(1, 0)" if self.recession else "")

    def to_json(self):
        return {"points": [[str(n), str(r)] for n, r in self.points], "recession": self.recession}


def hull_of_points(points, recession=True):
    """
    Extreme points of conv(points), plus the ray in +n direction when recession is set.

    >>> hull_of_points([(0, -1), (0, 1), (0, 0), (1, 0)], recession=False).points
    ((0, -1), (1, 0), (0, 1))
    """
    pts = {(Fraction(r), Fraction(n)) for n, r in points}
    if not pts:
        raise ValueError("hull of an empty point set")
    if recession:
        low = {}
        for r, n in pts:
            low[r] = min(n, low.get(r, n))
        pts = low.items()
    pts = sorted(pts)
    if len(pts) == 1 or recession:
        hull = _chain(pts)
    else:
        hull = _chain(pts)[:-1] + _chain(pts[::-1])[:-1]
    return SupportHull(tuple((_as_num(n), _as_num(r)) for r, n in sorted(hull)), recession)


def _as_num(x):
    return x.numerator if x.denominator == 1 else x


def support_points(f):
    # {(n, r)} of the stored support as exact rationals
    return {(_as_num(Fraction(q, f.qden)), _as_num(Fraction(z2, 2))) for q, z2 in f.support()}


def hull_of_support(f, recession=True):
    """Hull of supp(f), exact on every extreme point with n inside the window of f."""
    if f.is_zero:
        raise SeriesError("zero series has no support hull")
    return hull_of_points(support_points(f), recession)


def minkowski_sum(h1, h2):
    """
    Hull of the pairwise sums of extreme points.

    >>> s = hull_of_points([(0, -1), (0, 1)], recession=False)
    >>> minkowski_sum(s, s).points
    ((0, -2), (0, 2))
    """
    if h1.recession != h2.recession:
        raise ValueError("Minkowski sum of hulls with and without recession ray")
    return hull_of_points({(a[0] + b[0], a[1] + b[1]) for a in h1 for b in h2}, h1.recession)


def ord_via_hull(h, x):
    # min over extreme points of n + r x; callers add t x^2
    if not h.recession:
        raise ValueError("ord needs the recession ray")
    x = Fraction(x)
    return _as_num(min(Fraction(n) + Fraction(r) * x for n, r in h))


def series_valuation_1d(f):
    """
    Lowest q-exponent of a nonzero series, as an exact rational.

    >>> from models.common import FJSeries
    >>> series_valuation_1d(FJSeries({-72: {0: 1}, 24: {0: 1}}))
    -3
    """
    if f.is_zero:
        raise SeriesError("zero series has no valuation")
    return _as_num(Fraction(f.valuation, f.qden))
