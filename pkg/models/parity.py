# ThetaBlocks, AGPL-3.0 license
"""
Parity of D0 for the level-one family psi_v and the subset-sum identities used for holomorphy.

For v = 2^beta w with w odd, D0 is odd exactly when beta is odd and w = 1. Two independent reductions mod 2 are kept
alongside the closed criterion: a sum over odd-part tuples T(h) with binomials binom(12v, r_i), and the coefficients
H(n) of prod_{j odd} (1 + q^j)^(3 + 24 mu) when w = 1 + 8 mu.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, product
from math import comb, prod

from models.borcherds import borcherds_data, build_psi
from models.theta import ThetaBlockSpec


class ParityDisagreementError(ArithmeticError):
    pass


def two_adic_split(v):
    """
    (beta, w) with v = 2^beta w and w odd.

    >>> two_adic_split(24)
    (3, 3)
    """
    if v < 1:
        raise ValueError(f"v must be a positive integer, not {v}")
    beta = (v & -v).bit_length() - 1
    return beta, v >> beta


def d0_parity_closed(v):
    beta, w = two_adic_split(v)
    return int(beta % 2 == 1 and w == 1)


@lru_cache(maxsize=None)
def odd_part_tuples(h):
    """
    T(h): tuples (a_1, a_3, a_5, ...) of nonnegative integers with sum i a_i = h over odd i, without trailing zeros.

    >>> odd_part_tuples(4)
    ((1, 1), (4,))
    """
    if h < 0 or int(h) != h:
        return ()
    h = int(h)
    if h == 0:
        return ((),)
    out = []

    def rec(i, rest, acc):
        # parts i, i + 2, ... still to assign
        if rest == 0:
            out.append(tuple(acc))
            return
        if i > rest:
            return
        for a in range(rest // i + 1):
            acc.append(a)
            rec(i + 2, rest - a * i, acc)
            acc.pop()

    rec(1, h, [])
    return tuple(out)


def t_sum(h, n):
    # sum over T(h) of prod_i binom(n, a_i), mod 2 only matters to callers
    return sum(prod(comb(n, a) for a in t) for t in odd_part_tuples(h))


def d0_parity_tuples(v):
    """D0 mod 2 as sum_{m >= 1} sum_{T(v/2 - m^2)} prod binom(12v, r_i)."""
    total, m = 0, 1
    while 2 * m * m <= v:
        if v % 2 == 0:
            total += t_sum(v // 2 - m * m, 12 * v)
        m += 1
    return total % 2


def odd_power_product(e, nmax):
    # coefficients of prod_{j odd} (1 + q^j)^e through q^nmax
    c = [1] + [0] * nmax
    for j in range(1, nmax + 1, 2):
        new = [0] * (nmax + 1)
        for n, x in enumerate(c):
            if not x:
                continue
            for s in range(min(e, (nmax - n) // j) + 1):
                new[n + s * j] += x * comb(e, s)
        c = new
    return c


def d0_parity_generating(v):
    """D0 mod 2 as sum_{lambda >= 0} H(mu - lambda(lambda + 1)/2) when beta is odd and w = 1 + 8 mu, else 0."""
    beta, w = two_adic_split(v)
    if beta % 2 == 0 or w % 8 != 1:
        return 0
    mu = (w - 1) // 8
    H = odd_power_product(3 + 24 * mu, mu)
    total, lam = 0, 0
    while lam * (lam + 1) // 2 <= mu:
        total += H[mu - lam * (lam + 1) // 2]
        lam += 1
    return total % 2


@dataclass(frozen=True)
class ParityReduction:
    v: int
    beta: int
    w: int
    mu: object  # w = 1 + 8 mu, None when w is not 1 mod 8
    parity: int
    routes: dict = field(default_factory=dict)

    @property
    def symmetric(self):
        return self.parity == 0

    def to_json(self):
        return {"v": self.v, "beta": self.beta, "w": self.w, "mu": self.mu, "parity": self.parity, **self.routes}


def d0_parity_reduced(v):
    """
    D0 mod 2 for psi_v by the closed criterion, the T(h) sum and the H(n) generating function.

    >>> d0_parity_reduced(2).parity, d0_parity_reduced(4).parity, d0_parity_reduced(8).parity
    (1, 0, 1)
    """
    beta, w = two_adic_split(v)
    routes = {"closed": d0_parity_closed(v), "tuples": d0_parity_tuples(v), "generating": d0_parity_generating(v)}
    if len(set(routes.values())) != 1:
        raise ParityDisagreementError(f"D0 parity routes disagree for v={v}: {routes}")
    mu = (w - 1) // 8 if w % 8 == 1 else None
    return ParityReduction(v, beta, w, mu, routes["closed"], routes)


def family_spec(v):
    # eta^(24v - 6) theta_1^2 of weight 12v - 2, index 1 and order v
    return ThetaBlockSpec(24 * v - 6, (1, 1))


def d0_direct(v):
    # D0 of psi_v read off its polar coefficients
    return borcherds_data(build_psi(family_spec(v), 0), 1, v).D0


def _signed(d):
    # e_i = sgn(i) d_|i| over L = {-l, ..., -1, 1, ..., l}
    return [-x for x in reversed(d)] + list(d)


def subset_square_identity(d, a):
    """
    Brute-force check of sum_{|S| = a} e_S^2 = binom(2l - 2, a - 1) sum_i e_i^2 over subsets S of L.

    >>> subset_square_identity((1, 2), 2)
    True
    """
    e = _signed(d)
    if not 1 <= a <= len(e):
        raise ValueError(f"subset size must lie in 1..{len(e)}, not {a}")
    lhs = sum(sum(S) ** 2 for S in combinations(e, a))
    return lhs == comb(2 * len(d) - 2, a - 1) * sum(x * x for x in e)


def profile_square_divisibility(d, b):
    """Brute-force check that sum over |S_i| = b_i of (e_S_1 + ... + e_S_beta)^2 is a multiple of sum e_i^2."""
    e = _signed(d)
    if any(not 1 <= x <= len(e) for x in b):
        raise ValueError(f"subset sizes must lie in 1..{len(e)}, not {tuple(b)}")
    sums = [[sum(S) for S in combinations(e, x)] for x in b]
    lhs = sum(sum(c) ** 2 for c in product(*sums))
    return lhs % sum(x * x for x in e) == 0


def comb_identity_check(d, a=None, b=None):
    """Run the subset-size check (a) or the profile check (b); exactly one must be given."""
    if (a is None) == (b is None):
        raise ValueError("pass exactly one of a (subset size) or b (size profile)")
    return subset_square_identity(d, a) if a is not None else profile_square_divisibility(d, b)


def subset_identity_grid(lmax=3, dmax=3, beta_max=3):
    """
    Every (d, a, b) the subset checks cover for l <= lmax and entries of d in 1..dmax: each subset size a in 1..2l
    and each nondecreasing size profile b of length 1..beta_max with entries in 1..2l.

    Yields (d, "a", a) and (d, "b", b).
    """
    for ell in range(1, lmax + 1):
        for d in combinations_with_replacement(range(1, dmax + 1), ell):
            for a in range(1, 2 * ell + 1):
                yield d, "a", a
            for beta in range(1, beta_max + 1):
                for b in combinations_with_replacement(range(1, 2 * ell + 1), beta):
                    yield d, "b", b
