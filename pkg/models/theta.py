# ThetaBlocks, AGPL-3.0 license
"""
Theta blocks THBK(u; d1, ..., dl) = eta^u * prod theta_{d_i}, theta quarks and the ord-minimum classification.

The expansion uses the product form
    q^v prod_j (1 - q^j)^(l + u) prod_i (zeta^(d_i/2) - zeta^(-d_i/2)) prod_{i,j} (1 - q^j zeta^d_i)(1 - q^j zeta^-d_i)
with v = (u + 3l)/24, weight k = (l + u)/2 and index t = sum(d_i^2)/2.
"""

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import comb, floor, lcm

from models.common import QDEN, AtomFactor, FJSeries, SeriesError, ZetaPoly, expand_atom_product
from utils.general import parse_ints


class Classification(str, Enum):
    CUSP = "cusp"
    HOLOMORPHIC = "holomorphic"
    WEAK = "weak"
    WEAKLY_HOLOMORPHIC = "weakly-holomorphic"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class ThetaBlockSpec:
    # eta exponent u and the multiset d of theta arguments, kept sorted
    u: int
    d: tuple = ()

    def __post_init__(self):
        d = tuple(sorted(int(x) for x in self.d))
        if any(x < 1 for x in d):
            raise ValueError(f"theta arguments must be positive integers, not {d}")
        object.__setattr__(self, "d", d)
        if (len(d) + self.u) % 2:
            raise ValueError(f"weight is not integral: l + u = {len(d) + self.u} is odd")

    @classmethod
    def parse(cls, u, d):
        return cls(int(u), parse_ints(d))

    @classmethod
    def from_multiplicities(cls, u, mult):
        # {d: count} -> spec, zero counts ignored
        if any(c < 0 for c in mult.values()):
            raise ValueError("theta denominators are not supported")
        return cls(u, tuple(x for x, c in sorted(mult.items()) for _ in range(c)))

    @property
    def ell(self):
        return len(self.d)

    @property
    def k(self):
        return (self.ell + self.u) // 2

    @property
    def two_t(self):
        return sum(x * x for x in self.d)

    @property
    def t(self):
        t = Fraction(self.two_t, 2)
        return t.numerator if t.denominator == 1 else t

    @property
    def v(self):
        v = Fraction(self.u + 3 * self.ell, 24)
        return v.numerator if v.denominator == 1 else v

    @property
    def integral_order(self):
        return (self.u + 3 * self.ell) % 24 == 0

    @property
    def character(self):
        # multiplier eps^a v_H^b reported as (a mod 24, b mod 2)
        return (self.u + 3 * self.ell) % 24, sum(self.d) % 2

    @cached_property
    def multiplicities(self):
        return Counter(self.d)

    def __str__(self):
        thetas = " ".join(f"th{x}^{c}" if c > 1 else f"th{x}" for x, c in sorted(self.multiplicities.items()))
        return f"eta^{self.u} {thetas}".strip() if self.u else thetas or "1"


@dataclass(frozen=True)
class OrdProfile:
    minimum: Fraction
    argmin: tuple
    breakpoints: tuple


def bar_B2(x):
    """
    Periodized second Bernoulli polynomial B2(x - floor(x)), B2(x) = x^2 - x + 1/6.

    >>> bar_B2(0), bar_B2(Fraction(1, 2)), bar_B2(Fraction(5, 4))
    (Fraction(1, 6), Fraction(-1, 12), Fraction(-1, 48))
    """
    x = Fraction(x)
    x -= floor(x)
    return x * x - x + Fraction(1, 6)


def ord_value(spec, x):
    # k/12 + 1/2 sum B2bar(d_i x)
    return Fraction(spec.k, 12) + sum(bar_B2(d * Fraction(x)) for d in spec.d) / 2


def ord_profile(spec):
    """
    Exact minimum of ord(phi; x) over [0, 1].

    Between consecutive breakpoints j/L (L = lcm of the d_i) the function is one quadratic with leading coefficient t,
    so the minimum is attained at a breakpoint or at the vertex of a piece.
    """
    L = lcm(*spec.d) if spec.d else 1
    breakpoints = tuple(Fraction(j, L) for j in range(L + 1))
    candidates = set(breakpoints)
    if spec.two_t:
        for j in range(L):
            lo, hi = breakpoints[j], breakpoints[j + 1]
            f = [floor(d * lo) for d in spec.d]  # fractional part of d x is d x - f on [lo, hi)
            x = Fraction(sum(d * fi for d, fi in zip(spec.d, f)) * 2 + sum(spec.d), 2 * spec.two_t)
            if lo < x < hi:
                candidates.add(x)
    values = {x: ord_value(spec, x) for x in candidates}
    m = min(values.values())
    return OrdProfile(m, tuple(sorted(x for x, y in values.items() if y == m)), breakpoints)


def classify_theta_block(spec):
    """Cusp iff the ord minimum is positive, holomorphic iff nonnegative, weak iff v >= 0."""
    if not spec.integral_order:
        raise ValueError(f"not integral order: 24 does not divide u + 3l = {spec.u + 3 * spec.ell}")
    m = ord_profile(spec).minimum
    if m > 0:
        return Classification.CUSP
    if m == 0:
        return Classification.HOLOMORPHIC
    return Classification.WEAK if spec.v >= 0 else Classification.WEAKLY_HOLOMORPHIC


def theta_prefactor(mult, sign=-1):
    # prod (zeta^(d/2) + sign * zeta^(-d/2))^c expanded binomially per d
    out = ZetaPoly.monomial(0, 1)
    for d, c in sorted(mult.items()):
        out = out * ZetaPoly({d * (c - 2 * s): comb(c, s) * sign**s for s in range(c + 1)})
    return out


def theta_atoms(eta_power, mult, jmax, qstep=QDEN, sign=-1, js=None):
    # (1 + sign q^j)^eta_power and (1 + sign q^j zeta^(+-d))^c for j in js (default 1..jmax)
    atoms = []
    for j in js if js is not None else range(1, jmax + 1):
        atoms.append(AtomFactor(sign, j * qstep, 0, eta_power))
        for d, c in mult.items():
            atoms += [AtomFactor(sign, j * qstep, 2 * d, c), AtomFactor(sign, j * qstep, -2 * d, c)]
    return atoms


def theta_product(u, mult, trunc, qden=QDEN):
    """
    Expansion of eta^u prod theta_d^c through scaled q-window trunc, allowing a fractional leading order.

    Args:
        u (int): eta exponent, may be negative
        mult (dict): {d: c} theta multiplicities, c >= 0
        trunc (int): scaled q-window
        qden (int): q-denominator, must be a multiple of 24 / gcd(24, u + 3l)

    Returns:
        (FJSeries): the truncated expansion
    """
    ell = sum(mult.values())
    v = Fraction((u + 3 * ell) * qden, 24)
    if v.denominator != 1:
        raise ValueError(f"order {Fraction(u + 3 * ell, 24)} is not representable with qden={qden}")
    v = int(v)
    lead = theta_prefactor(mult)
    if trunc < v:
        return FJSeries.zero(trunc, qden)
    body = expand_atom_product(theta_atoms(u + ell, mult, (trunc - v) // qden, qden), trunc - v, qden)
    return FJSeries._from_raw({q: (p * lead).terms for q, p in body.terms.items()}, trunc - v, qden).shift(v)


def build_theta_block(spec, trunc, qden=QDEN):
    """
    Truncated expansion of THBK(u; d) through q-order trunc (an integer).

    >>> f = build_theta_block(ThetaBlockSpec(24), 2)
    >>> f.coeff(1, 0), f.coeff(2, 0)
    (1, -24)
    """
    if not spec.integral_order:
        raise ValueError(f"not integral order: 24 does not divide u + 3l = {spec.u + 3 * spec.ell}")
    return theta_product(spec.u, spec.multiplicities, trunc * qden, qden)


def build_eta_power(u, trunc, qden=QDEN):
    # eta^u through q-order trunc; order u/24 needs qden divisible by 24/gcd(u, 24)
    return theta_product(u, {}, trunc * qden, qden)


def build_theta_quark(a, b, trunc, qden=QDEN):
    """Theta quark theta_a theta_b theta_(a+b) / eta of weight 1 and index a^2 + ab + b^2, through q-order trunc."""
    if a < 1 or b < 1:
        raise ValueError(f"quark arguments must be positive, not ({a}, {b})")
    return theta_product(-1, Counter((a, b, a + b)), trunc * qden, qden)


def quark_index(a, b):
    return a * a + a * b + b * b


def quark_product(pairs):
    """Theta block spec of prod theta_{a,b}; each quark contributes eta^-1 theta_a theta_b theta_(a+b)."""
    d = [x for a, b in pairs for x in (a, b, a + b)]
    return ThetaBlockSpec(-len(pairs), tuple(d))


def eta_theta_family(d):
    """Spec eta^(3(8-l)) prod theta_{d_i} of weight 12 - l and order 1 (1 <= l <= 8)."""
    d = tuple(d)
    if not 1 <= len(d) <= 8:
        raise ValueError(f"family needs 1 <= l <= 8 theta factors, not {len(d)}")
    return ThetaBlockSpec(3 * (8 - len(d)), d)


def build_theta_series(d, trunc, qden=QDEN):
    """
    theta_d(tau, z) = sum_{n odd} (-4/n) q^(n^2/8) zeta^(d n/2) through scaled q-window trunc.

    >>> build_theta_series(1, 24).row(3) == ZetaPoly({1: 1, -1: -1})
    True
    """
    if qden % 8:
        raise SeriesError(f"theta needs qden divisible by 8, not {qden}")
    step, raw, n = qden // 8, {}, 1
    while n * n * step <= trunc:
        s = 1 if n % 4 == 1 else -1
        raw[n * n * step] = {d * n: s, -d * n: -s}
        n += 2
    return FJSeries._from_raw(raw, trunc, qden)


def _zeta_window(f, zmax, two_t_rest, budget):
    # keep the terms a remaining theta product of index two_t_rest/2 can still move into |r| <= zmax by q^budget
    raw = {}
    for q, p in f.terms.items():
        room = 8 * two_t_rest * (budget - q)
        row = {}
        for z2, c in p.terms.items():
            a = abs(z2) - 2 * zmax
            if a <= 0 or a * a * f.qden <= room:
                row[z2] = c
        if row:
            raw[q] = row
    return FJSeries._from_raw(raw, f.trunc, f.qden)


def build_theta_block_window(spec, trunc, zmax=None, qden=QDEN):
    """
    THBK(u; d) through q-order trunc from the theta series, optionally keeping only the terms zeta^r with |r| <= zmax.

    The theta factors are multiplied one at a time, largest d first. With zmax set, terms that the remaining factors
    can no longer bring back into range are dropped after each step; eta^u carries no zeta and is applied last.
    """
    if not spec.integral_order:
        raise ValueError(f"not integral order: 24 does not divide u + 3l = {spec.u + 3 * spec.ell}")
    if qden % 24:
        raise SeriesError(f"eta^u needs qden divisible by 24, not {qden}")
    T, step, eta_lead = trunc * qden, qden // 8, spec.u * qden // 24
    window = T - eta_lead - (spec.ell - 1) * step
    rest, acc = spec.two_t, FJSeries.one(qden)
    for d in sorted(spec.d, reverse=True):
        rest -= d * d
        acc = acc * build_theta_series(d, window, qden)
        if zmax is not None:
            acc = _zeta_window(acc, zmax, rest, T - eta_lead)
    return (acc * theta_product(spec.u, {}, T - spec.ell * step, qden)).restrict(T)


def random_theta_block(rng, vmax=2, lmax=6, dmax=3):
    """Random spec eta^(24v - 3l) prod theta_d of integral order 1 <= v <= vmax with sum(d) even (integral index)."""
    d = [rng.randint(1, dmax) for _ in range(rng.randint(1, lmax))]
    if sum(d) % 2:
        d[0] += 1 if d[0] < dmax else -1
    v = rng.randint(1, vmax)
    return ThetaBlockSpec(24 * v - 3 * len(d), tuple(d))
