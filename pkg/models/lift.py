# ThetaBlocks, AGPL-3.0 license
"""Hecke operators V_m on Jacobi Fourier coefficients and the Gritsenko lift as a Fourier-Jacobi expansion."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from sympy import bernoulli, divisor_sigma, divisors

from models.common import QDEN, FJSeries, SeriesError, TruncationError, _norm, fj_coeff
from models.theta import build_theta_block


@dataclass(frozen=True)
class FJExpansion:
    # entries ((m, series), ...) with series the coefficient of xi^(m t)
    t: int
    weight: object
    entries: tuple

    def __post_init__(self):
        ms = [m for m, _ in self.entries]
        if ms != sorted(set(ms)):
            raise ValueError(f"Fourier-Jacobi indices must be sorted and distinct, not {ms}")

    @property
    def indices(self):
        return tuple(m for m, _ in self.entries)

    def entry(self, m):
        for i, f in self.entries:
            if i == m:
                return f
        raise KeyError(f"no Fourier-Jacobi entry at index {m}")

    def __contains__(self, m):
        return m in self.indices

    def __iter__(self):
        return iter(self.entries)

    def to_json(self):
        return {
            "t": self.t,
            "weight": str(self.weight),
            "entries": [{"m": m, "index": m * self.t, "series": f.to_json()} for m, f in self.entries],
        }


def hecke_weight_factor(d, k):
    # d^(k-1), rational for k < 1
    return d ** (k - 1) if k >= 1 else Fraction(1, d ** (1 - k))


def _require_integral(phi):
    for q, z2, _ in phi.coefficients():
        if q % phi.qden or z2 % 2:
            raise SeriesError(
                f"fractional exponents: q^{Fraction(q, phi.qden)} zeta^{Fraction(z2, 2)} has no V_m image"
            )


def apply_Vm(phi, k, m):
    """
    Coefficients of phi|V_m: c(n, r) = sum_{d | (n, r, m)} d^(k-1) c(nm/d^2, r/d; phi).

    Computed source-driven: each c(N, R; phi) feeds every target (N d^2/m, R d) with d | m. The input window T (in
    q-orders) gives the result window floor(T/m).
    """
    if m < 1:
        raise ValueError(f"V_m needs m >= 1, not {m}")
    _require_integral(phi)
    qden = phi.qden
    trunc = None if phi.trunc is None else qden * ((phi.trunc // qden) // m)
    raw = {}
    for d in map(int, divisors(m)):
        w = hecke_weight_factor(d, k)
        for q, z2, c in phi.coefficients():
            n, rem = divmod(q // qden * d * d, m)
            if rem or n % d:
                continue
            if trunc is not None and n * qden > trunc:
                continue
            row = raw.setdefault(n * qden, {})
            row[z2 * d] = row.get(z2 * d, 0) + w * c
    return FJSeries._from_raw(raw, trunc, qden)


def eisenstein_series(k, trunc, qden=QDEN):
    """
    G_k = -B_k/(2k) + sum sigma_(k-1)(n) q^n through q-order trunc, for even k >= 4.

    >>> eisenstein_series(4, 1).coeff(0, 0)
    Fraction(1, 240)
    """
    if k < 4 or k % 2:
        raise ValueError(f"Eisenstein series needs even k >= 4, not {k}")
    b = bernoulli(k)
    raw = {0: {0: _norm(-Fraction(int(b.p), int(b.q)) / (2 * k))}}
    for n in range(1, trunc + 1):
        raw[n * qden] = {0: int(divisor_sigma(n, k - 1))}
    return FJSeries._from_raw(raw, trunc * qden, qden)


def grit_fj_expansion(phi, k, t, M, trunc):
    """
    Gritsenko lift as Fourier-Jacobi entries m = 1..M (phi|V_m), plus c(0,0) G_k at m = 0 when c(0,0; phi) != 0.

    Args:
        phi (FJSeries): Jacobi form of weight k and index t, window at least M * trunc
        k (int): weight
        t (int): index
        M (int): largest Fourier-Jacobi index
        trunc (int): q-order of every entry

    Returns:
        (FJExpansion): entries restricted to q-order trunc
    """
    qden = phi.qden
    entries = []
    c00 = fj_coeff(phi, 0, 0)
    if c00:
        if k < 4 or k % 2:
            raise ValueError(f"Eisenstein branch needs even k >= 4 but c(0,0) = {c00} and k = {k}")
        entries.append((0, eisenstein_series(k, trunc, qden).scale(c00)))
    for m in range(1, M + 1):
        f = apply_Vm(phi, k, m)
        if f.trunc is not None and f.trunc < trunc * qden:
            raise TruncationError(f"window too small: phi|V_{m} is known to q^{f.trunc // qden}, need q^{trunc}")
        entries.append((m, f.restrict(trunc * qden)))
    return FJExpansion(t, k, tuple(entries))


def grit_coefficient(phi, k, t, T):
    """
    Fourier coefficient of Grit(phi) at T = (n, r, m): sum_{delta | (n, r, m)} delta^(k-1) c(nm/delta^2, r/delta).

    >>> from models.theta import ThetaBlockSpec, build_theta_block
    >>> grit_coefficient(build_theta_block(ThetaBlockSpec(18, (1, 1)), 2), 10, 1, (1, 1, 1))
    1
    """
    n, r, m = T
    if m < 1:
        raise ValueError(f"lift coefficients need m >= 1, not {m}")
    total = 0
    for delta in map(int, divisors(gcd(n, r, m))):
        total += hecke_weight_factor(delta, k) * fj_coeff(phi, Fraction(n * m, delta * delta), Fraction(r, delta))
    return _norm(total) if isinstance(total, Fraction) else total


def grit_expansion_for_spec(spec, fjmax, trunc, qden=QDEN):
    # Grit(phi) for a theta block phi, with phi built to the q-order V_fjmax needs
    phi = build_theta_block(spec, fjmax * trunc, qden)
    return grit_fj_expansion(phi, spec.k, spec.t, fjmax, trunc)
