# ThetaBlocks, AGPL-3.0 license
"""
Common series modules.

An FJSeries maps scaled q-exponents (true exponent = key / qden) to Laurent polynomials in zeta. Zeta exponents are
stored doubled ("z2") so the half-integral powers of theta functions stay integral. Coefficients are Python ints
whenever integral and Fractions otherwise; zeros are never stored.

Usage:
    from models.common import AtomFactor, FJSeries, expand_atom_product

    f = expand_atom_product([AtomFactor(-1, 24, 0, -1)], trunc=24 * 5)  # 1/(1-q) through q^5
"""

from dataclasses import dataclass
from fractions import Fraction
from math import comb

QDEN = 24  # eta needs 1/24, theta 1/8, half-integral products 1/2


class SeriesError(ValueError):
    pass


class TruncationError(SeriesError):
    pass


class InexactDivisionError(ArithmeticError):
    pass


def _norm(c):
    # collapse integral Fractions to int
    if type(c) is int:
        return c
    return c.numerator if c.denominator == 1 else c


def as_coeff(x):
    """
    Convert an exact number to a stored coefficient, rejecting floats.

    >>> as_coeff(Fraction(4, 2))
    2
    >>> as_coeff(Fraction(1, 3))
    Fraction(1, 3)
    """
    if isinstance(x, bool) or not isinstance(x, (int, Fraction)):
        raise TypeError(f"exact coefficient required, not {type(x).__name__}")
    return _norm(x) if isinstance(x, Fraction) else int(x)


def _div(a, b):
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        return q if not r else Fraction(a, b)
    return _norm(Fraction(a) / b)


def _pruned(d):
    return {k: _norm(v) for k, v in d.items() if v}


def _poly_mul_into(acc, a, b, c=1):
    # acc += c * a * b on raw {z2: coeff} dicts
    for za, ca in a.items():
        if c != 1:
            ca = ca * c
        for zb, cb in b.items():
            k = za + zb
            acc[k] = acc.get(k, 0) + ca * cb


def _fmt_exp(e):
    e = Fraction(e)
    return str(e.numerator) if e.denominator == 1 else f"({e})"


def _tmin(*ts):
    ts = [t for t in ts if t is not None]
    return min(ts) if ts else None


def gbinom(p, s):
    """
    Generalized binomial coefficient binom(p, s) for any integer p and s >= 0.

    >>> gbinom(-1, 3), gbinom(-2, 2), gbinom(5, 2), gbinom(2, 3)
    (-1, 3, 10, 0)
    """
    if s < 0:
        return 0
    if p >= 0:
        return comb(p, s)
    return (-1) ** s * comb(-p + s - 1, s)


class ZetaPoly:
    # Laurent polynomial in zeta with exact coefficients, keyed by twice the exponent
    __slots__ = ("terms",)
    __hash__ = None

    def __init__(self, terms=None):
        self.terms = _pruned(terms or {})

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def monomial(cls, z2=0, c=1):
        return cls({z2: as_coeff(c)})

    @classmethod
    def from_exponents(cls, d):
        # {Fraction exponent: coeff} -> ZetaPoly
        out = {}
        for e, c in d.items():
            e2 = Fraction(e) * 2
            if e2.denominator != 1:
                raise SeriesError(f"zeta exponent {e} is not a half-integer")
            out[int(e2)] = out.get(int(e2), 0) + as_coeff(c)
        return cls(out)

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms))

    def items(self):
        return sorted(self.terms.items())

    def coeff(self, z2):
        return self.terms.get(z2, 0)

    @property
    def lo(self):
        return min(self.terms)

    @property
    def hi(self):
        return max(self.terms)

    def __eq__(self, other):
        if isinstance(other, ZetaPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({0: other} if other else {})
        return NotImplemented

    def __neg__(self):
        return ZetaPoly._raw({k: -v for k, v in self.terms.items()})

    def __add__(self, other):
        if not isinstance(other, ZetaPoly):
            other = ZetaPoly.monomial(0, other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return ZetaPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, ZetaPoly) else ZetaPoly.monomial(0, -other))

    def __mul__(self, other):
        if isinstance(other, ZetaPoly):
            acc = {}
            _poly_mul_into(acc, self.terms, other.terms)
            return ZetaPoly(acc)
        c = as_coeff(other)
        return ZetaPoly({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise SeriesError("negative powers of zeta polynomials are not Laurent polynomials")
        out, base = ZetaPoly.monomial(0, 1), self
        while n:
            if n & 1:
                out = out * base
            base, n = base * base, n >> 1
        return out

    def shift(self, z2):
        return ZetaPoly._raw({k + z2: v for k, v in self.terms.items()})

    def dilate(self, b):
        return ZetaPoly._raw({k * b: v for k, v in self.terms.items()})

    def divexact(self, other):
        """
        Exact Laurent division, raising InexactDivisionError on a nonzero remainder.

        >>> a = ZetaPoly({1: 1, -1: -1}) * ZetaPoly({1: 1, -1: 1})  # zeta - zeta^-1
        >>> a.divexact(ZetaPoly({1: 1, -1: 1})) == ZetaPoly({1: 1, -1: -1})
        True
        """
        if not other:
            raise ZeroDivisionError("zeta polynomial division by zero")
        if not self:
            return ZetaPoly()
        rem = dict(self.terms)
        b = other.terms
        bhi, lead = other.hi, other.terms[other.hi]
        qlo = self.lo - other.lo
        quot = {}
        while rem:
            e = max(rem) - bhi
            if e < qlo:
                raise InexactDivisionError("inexact division: zeta polynomial remainder is nonzero")
            c = _div(rem[max(rem)], lead)
            quot[e] = c
            for z, bc in b.items():
                k = z + e
                v = rem.get(k, 0) - c * bc
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return ZetaPoly(quot)

    def __repr__(self):
        return f"ZetaPoly({self.terms})"

    def __str__(self):
        if not self.terms:
            return "0"
        s = ""
        for z2, c in sorted(self.terms.items(), reverse=True):
            mono = "" if z2 == 0 else "ζ" if z2 == 2 else f"ζ^{_fmt_exp(Fraction(z2, 2))}"
            mag = abs(c)
            body = f"{mag}" if not mono else mono if mag == 1 else f"{mag}{mono}"
            s += (" - " if c < 0 else " + ") + body if s else ("-" if c < 0 else "") + body
        return s


class FJSeries:
    # Truncated series sum_n q^(n/qden) P_n(zeta); trunc=None means exact (no truncation)
    __slots__ = ("qden", "trunc", "terms")
    __hash__ = None

    def __init__(self, terms=None, trunc=None, qden=QDEN):
        if qden < 1:
            raise SeriesError(f"qden must be positive, not {qden}")
        rows = {}
        for q, p in (terms or {}).items():
            if trunc is not None and q > trunc:
                continue
            p = p if isinstance(p, ZetaPoly) else ZetaPoly(p)
            if p:
                rows[q] = p
        self.qden, self.trunc, self.terms = qden, trunc, dict(sorted(rows.items()))

    @classmethod
    def _from_raw(cls, raw, trunc, qden):
        f = cls.__new__(cls)
        rows = {}
        for q in sorted(raw):
            if trunc is not None and q > trunc:
                continue
            p = _pruned(raw[q])
            if p:
                rows[q] = ZetaPoly._raw(p)
        f.qden, f.trunc, f.terms = qden, trunc, rows
        return f

    @classmethod
    def zero(cls, trunc=None, qden=QDEN):
        return cls({}, trunc, qden)

    @classmethod
    def one(cls, qden=QDEN):
        return cls({0: {0: 1}}, None, qden)

    @classmethod
    def monomial(cls, q=0, z2=0, c=1, trunc=None, qden=QDEN):
        return cls({q: {z2: as_coeff(c)}}, trunc, qden)

    @classmethod
    def from_coefficients(cls, coeffs, trunc=None, qden=QDEN):
        # {(q, z2): c} -> FJSeries
        raw = {}
        for (q, z2), c in coeffs.items():
            row = raw.setdefault(q, {})
            row[z2] = row.get(z2, 0) + as_coeff(c)
        return cls._from_raw(raw, trunc, qden)

    # Queries ----------------------------------------------------------------------------------------------------------
    @property
    def is_zero(self):
        return not self.terms

    @property
    def valuation(self):
        # lowest stored scaled q-exponent
        if not self.terms:
            raise SeriesError("zero series has no valuation")
        return next(iter(self.terms))

    @property
    def valuation_bound(self):
        # lowest scaled q-exponent that may carry a nonzero coefficient, None for the exact zero series
        if self.terms:
            return next(iter(self.terms))
        return None if self.trunc is None else self.trunc + 1

    @property
    def max_q(self):
        return max(self.terms) if self.terms else None

    def row(self, q):
        return self.terms.get(q, ZetaPoly())

    def coefficients(self):
        for q, p in self.terms.items():
            for z2, c in p.items():
                yield q, z2, c

    def support(self):
        return {(q, z2) for q, z2, _ in self.coefficients()}

    def coeff(self, n, r):
        return fj_coeff(self, n, r)

    def is_integral(self):
        return all(type(c) is int for _, _, c in self.coefficients())

    def min_discriminant(self, t):
        # min over the stored support of 4tn - r^2
        if not self.terms:
            return None
        t = Fraction(t)
        return min(4 * t * Fraction(q, self.qden) - Fraction(z2 * z2, 4) for q, z2, _ in self.coefficients())

    def __len__(self):
        return sum(len(p) for p in self.terms.values())

    # Arithmetic -------------------------------------------------------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, FJSeries):
            return NotImplemented
        return self.qden == other.qden and self.trunc == other.trunc and self.terms == other.terms

    def __neg__(self):
        return self.scale(-1)

    def __add__(self, other):
        return fj_add(self, other)

    def __sub__(self, other):
        return fj_add(self, -other)

    def __mul__(self, other):
        if isinstance(other, FJSeries):
            return fj_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, FJSeries):
            return fj_exact_div(self, other)
        return self.scale(Fraction(1) / as_coeff(other))

    def scale(self, c):
        c = as_coeff(c)
        if not c:
            return FJSeries.zero(self.trunc, self.qden)
        raw = {q: {z: v * c for z, v in p.terms.items()} for q, p in self.terms.items()}
        return FJSeries._from_raw(raw, self.trunc, self.qden)

    def shift(self, dq, dz2=0):
        # multiply by q^(dq/qden) zeta^(dz2/2)
        trunc = None if self.trunc is None else self.trunc + dq
        raw = {q + dq: {z + dz2: c for z, c in p.terms.items()} for q, p in self.terms.items()}
        return FJSeries._from_raw(raw, trunc, self.qden)

    def restrict(self, trunc):
        trunc = _tmin(self.trunc, trunc)
        return FJSeries._from_raw({q: p.terms for q, p in self.terms.items()}, trunc, self.qden)

    def dilate(self, a, b):
        return fj_dilate(self, a, b)

    # Serialization ----------------------------------------------------------------------------------------------------
    def to_json(self):
        terms = []
        for q, z2, c in self.coefficients():
            c = Fraction(c)
            terms.append({"q": q, "z2": z2, "num": str(c.numerator), "den": str(c.denominator)})
        return {"qden": self.qden, "trunc": self.trunc, "terms": terms}

    @classmethod
    def from_json(cls, d):
        coeffs = {(int(t["q"]), int(t["z2"])): Fraction(int(t["num"]), int(t["den"])) for t in d["terms"]}
        return cls.from_coefficients(coeffs, d["trunc"], int(d["qden"]))

    def __repr__(self):
        return f"FJSeries(qden={self.qden}, trunc={self.trunc}, terms={len(self)})"

    def __str__(self):
        parts = []
        for q, p in self.terms.items():
            e = Fraction(q, self.qden)
            qs = "" if e == 0 else "q" if e == 1 else f"q^{_fmt_exp(e)}"
            ps = str(p)
            if qs and len(p) > 1:
                ps = f"{qs}*({ps})"
            elif qs:
                ps = f"-{qs}" if ps == "-1" else qs if ps == "1" else f"{qs}*{ps}"
            parts.append(ps)
        s = " + ".join(parts) if parts else "0"
        if self.trunc is not None:
            s += f" + O(q^{_fmt_exp(Fraction(self.trunc + 1, self.qden))})"
        return s


@dataclass(frozen=True)
class AtomFactor:
    # (1 + sign * q^(qexp/qden) * zeta^(z2/2)) ** power
    sign: int
    qexp: int
    z2: int
    power: int

    def __post_init__(self):
        if self.sign not in {1, -1}:
            raise SeriesError(f"malformed factor: sign must be +1 or -1, not {self.sign}")
        if self.qexp < 0:
            raise SeriesError(f"malformed factor: negative q-exponent {self.qexp}")
        if self.qexp == 0 and self.power < 0 and (self.z2 != 0 or self.sign == -1):
            raise SeriesError(f"malformed factor: {self} is not invertible as a series")

    @property
    def finite(self):
        return self.power >= 0 or self.qexp == 0

    def terms(self, trunc=None):
        # (scaled q, z2, coeff) of the generalized binomial expansion through trunc
        if self.qexp == 0 and self.z2 == 0:
            yield 0, 0, _norm(Fraction(1 + self.sign) ** self.power)
            return
        smax = self.power
        if self.qexp and trunc is not None:
            smax = trunc // self.qexp if self.power < 0 else min(self.power, trunc // self.qexp)
        for s in range(smax + 1):
            yield s * self.qexp, s * self.z2, gbinom(self.power, s) * self.sign**s


def _merge_atoms(factors):
    powers = {}
    for f in factors:
        key = (f.sign, f.qexp, f.z2)
        powers[key] = powers.get(key, 0) + f.power
    return [AtomFactor(s, q, z, p) for (s, q, z), p in powers.items() if p]


def fj_add(f, g):
    """Coefficient-wise sum, truncated at the smaller window."""
    _check_qden(f, g)
    trunc = _tmin(f.trunc, g.trunc)
    raw = {q: dict(p.terms) for q, p in f.terms.items()}
    for q, p in g.terms.items():
        row = raw.setdefault(q, {})
        for z, c in p.terms.items():
            row[z] = row.get(z, 0) + c
    return FJSeries._from_raw(raw, trunc, f.qden)


def fj_mul(f, g):
    """Cauchy product; every retained coefficient equals the coefficient of the untruncated product."""
    _check_qden(f, g)
    vf, vg = f.valuation_bound, g.valuation_bound
    if vf is None or vg is None:
        return FJSeries.zero(None, f.qden)
    trunc = _tmin(None if f.trunc is None else f.trunc + vg, None if g.trunc is None else g.trunc + vf)
    raw = {}
    rows = list(g.terms.items())
    for qa, pa in f.terms.items():
        for qb, pb in rows:
            q = qa + qb
            if trunc is not None and q > trunc:
                break
            _poly_mul_into(raw.setdefault(q, {}), pa.terms, pb.terms)
    return FJSeries._from_raw(raw, trunc, f.qden)


def fj_exact_div(num, den, trunc=None):
    """
    Quotient num/den computed q-order by q-order.

    Each step divides the accumulated zeta polynomial by the lowest coefficient of den and raises InexactDivisionError
    on a remainder. The window follows the fj_mul bookkeeping and may be capped by trunc; a quotient of two exact
    series needs that cap.
    """
    _check_qden(num, den)
    if den.is_zero:
        raise SeriesError("division by a zero series")
    vd = den.valuation
    lead = den.terms[vd]
    vn = num.valuation_bound
    if vn is None:
        return FJSeries.zero(trunc, num.qden)
    vq = vn - vd
    T = _tmin(
        None if num.trunc is None else num.trunc - vd,
        None if den.trunc is None else den.trunc - vd + vq,
        trunc,
    )
    if T is None:
        raise SeriesError("unbounded quotient: pass trunc")
    quot = {}
    for n in range(vq, T + 1):
        src = num.terms.get(n + vd)
        acc = dict(src.terms) if src is not None else {}
        for qi, pi in quot.items():
            p = den.terms.get(n + vd - qi)
            if p is not None:
                _poly_mul_into(acc, pi.terms, p.terms, -1)
        acc = _pruned(acc)
        if acc:
            try:
                quot[n] = ZetaPoly._raw(acc).divexact(lead)
            except InexactDivisionError as e:
                raise InexactDivisionError(f"{e} at q^{_fmt_exp(Fraction(n, num.qden))}") from None
    return FJSeries(quot, T, num.qden)


def fj_dilate(f, a, b):
    """Substitute q -> q^a, zeta -> zeta^b."""
    if a < 1 or b < 1:
        raise SeriesError(f"dilation factors must be positive integers, not ({a}, {b})")
    trunc = None if f.trunc is None else a * (f.trunc + 1) - 1
    return FJSeries._from_raw({q * a: p.dilate(b).terms for q, p in f.terms.items()}, trunc, f.qden)


def rescale(f, qden):
    """Re-express f over a new q-denominator."""
    raw = {}
    for q, p in f.terms.items():
        e = Fraction(q * qden, f.qden)
        if e.denominator != 1:
            raise SeriesError(f"q-exponent {Fraction(q, f.qden)} is not representable with qden={qden}")
        raw[int(e)] = dict(p.terms)
    trunc = None if f.trunc is None else ((f.trunc + 1) * qden - 1) // f.qden
    return FJSeries._from_raw(raw, trunc, qden)


def expand_atom_product(factors, trunc, qden=QDEN):
    """
    Truncated product of AtomFactors, each expanded by the generalized binomial series.

    Args:
        factors (Iterable[AtomFactor]): factors, repeated factors are merged first
        trunc (int | None): scaled q-window; None only when every factor is a polynomial
        qden (int): q-denominator of the result

    Returns:
        (FJSeries): the product through trunc
    """
    factors = _merge_atoms(factors)
    if trunc is None and not all(f.finite for f in factors):
        raise SeriesError("an infinite product needs a truncation window")
    raw = {0: {0: 1}}
    for f in factors:
        new = {}
        for dq, dz, c in f.terms(trunc):
            for q in sorted(raw):
                if trunc is not None and q + dq > trunc:
                    break
                acc = new.setdefault(q + dq, {})
                for z, v in raw[q].items():
                    k = z + dz
                    acc[k] = acc.get(k, 0) + c * v
        raw = {q: p for q, p in ((q, _pruned(p)) for q, p in new.items()) if p}
    return FJSeries._from_raw(raw, trunc, qden)


def fj_coeff(f, n, r):
    """
    Exact coefficient of q^n zeta^r, 0 if absent, TruncationError beyond the window.

    >>> f = FJSeries.monomial(3, 1, 5, trunc=24)
    >>> fj_coeff(f, Fraction(1, 8), Fraction(1, 2)), fj_coeff(f, 0, 0)
    (5, 0)
    """
    q, z2 = Fraction(n) * f.qden, Fraction(r) * 2
    if f.trunc is not None and q > f.trunc:
        raise TruncationError(f"beyond truncation: q^{_fmt_exp(n)} lies past q^{_fmt_exp(Fraction(f.trunc, f.qden))}")
    if q.denominator != 1 or z2.denominator != 1:
        return 0
    p = f.terms.get(int(q))
    return p.coeff(int(z2)) if p is not None else 0


def _check_qden(f, g):
    if f.qden != g.qden:
        raise SeriesError(f"denominator mismatch: {f.qden} != {g.qden}")
