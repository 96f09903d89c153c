# ThetaBlocks, AGPL-3.0 license
"""
Borcherds products of psi = (-1)^v (phi|V_2) / phi for a theta block phi of order v.

psi is built two ways (exact division and the closed product formula), its singular coefficients are reduced to
(discriminant, r mod 2t) classes, and the Borcherds product is expanded in Fourier-Jacobi form both as
theta block * exp(-Grit(psi)) and directly from the infinite product.

Usage:
    from models.borcherds import borcherds_data, build_psi, humbert_divisor, singular_table
    from models.theta import ThetaBlockSpec

    spec = ThetaBlockSpec(12, (1, 1, 2, 2))
    psi = build_psi(spec, trunc=2)
    print(humbert_divisor(singular_table(psi, spec.t, 0)))
"""

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import NamedTuple, Optional

from sympy import divisor_sigma

from models.common import QDEN, AtomFactor, FJSeries, SeriesError, TruncationError, _tmin, expand_atom_product, gbinom
from models.lift import FJExpansion, apply_Vm, hecke_weight_factor
from models.theta import ThetaBlockSpec, build_theta_block, theta_atoms, theta_prefactor
from utils.general import LOGGER


class BorcherdsIdentityError(ArithmeticError):
    pass


class IntegralityError(ArithmeticError):
    pass


def pole_bound(v):
    # psi has no q-power below -floor(v/2)
    return floor(Fraction(v) / 2)


def canonical_r(r, t):
    # representative of r mod 2t in (-t, t]
    x = r % (2 * t)
    return x - 2 * t if x > t else x


def _check_psi_spec(spec):
    if not spec.integral_order or spec.v < 1:
        raise ValueError(f"psi needs a theta block of integral order v >= 1, not v = {spec.v}")
    if spec.two_t % 2:
        raise ValueError(f"psi needs an integral index, not t = {spec.t}")


def _check_poles(psi, v):
    if not psi.is_zero and psi.valuation < -pole_bound(v) * psi.qden:
        raise ArithmeticError(f"psi has a pole of order {-psi.valuation / psi.qden} > floor(v/2) = {pole_bound(v)}")
    return psi


def build_psi_division(spec, trunc, qden=QDEN):
    """psi = (-1)^v (phi|V_2)/phi through q-order trunc by exact division."""
    _check_psi_spec(spec)
    v, k = spec.v, spec.k
    phi = build_theta_block(spec, 2 * (trunc + v), qden)
    psi = (apply_Vm(phi, k, 2) / phi).scale((-1) ** v).restrict(trunc * qden)
    return _check_poles(psi, v)


def build_psi_product(spec, trunc, qden=QDEN):
    """
    psi through q-order trunc from its closed product form.

    With x = q^(1/2) and f(x) = prod_{j odd} (1 + x^j)^(2k) prod_i (1 + x^j zeta^d_i)(1 + x^j zeta^-d_i),
        psi = (-1)^v 2^(k-1) q^v prod_j (1 + q^j)^(2k) prod_i (zeta^(d_i/2) + zeta^(-d_i/2))(1 + q^j zeta^(+-d_i))
              + 1/2 q^(-v/2) (f(x) + (-1)^v f(-x)).
    The second part keeps exactly the terms x^e of f with e = v mod 2, so only integral q-powers survive.
    """
    _check_psi_spec(spec)
    if qden % 2:
        raise SeriesError(f"half-integral q-powers need an even qden, not {qden}")
    v, k, mult = spec.v, spec.k, spec.multiplicities
    T, half = trunc * qden, qden // 2

    first = FJSeries.zero(T, qden)
    if trunc >= v:
        w = T - v * qden
        body = expand_atom_product(theta_atoms(2 * k, mult, w // qden, qden, sign=1), w, qden)
        lead = theta_prefactor(mult, sign=1)
        first = FJSeries._from_raw({q: (p * lead).terms for q, p in body.terms.items()}, w, qden)
        first = first.shift(v * qden).scale((-1) ** v * hecke_weight_factor(2, k))

    X = T + v * half
    js = range(1, X // half + 1, 2)
    f_plus = expand_atom_product(theta_atoms(2 * k, mult, None, half, sign=1, js=js), X, qden)
    f_minus = expand_atom_product(theta_atoms(2 * k, mult, None, half, sign=-1, js=js), X, qden)
    second = (f_plus + f_minus.scale((-1) ** v)).scale(Fraction(1, 2)).shift(-v * half)
    return _check_poles(first + second, v)


def build_psi(spec, trunc, route="product", qden=QDEN):
    if route not in {"product", "division"}:
        raise ValueError(f"route must be 'product' or 'division', not {route!r}")
    return (build_psi_product if route == "product" else build_psi_division)(spec, trunc, qden)


@dataclass(frozen=True)
class SingularTable:
    # singular coefficients of psi keyed by (D = 4tn - r^2 <= 0, r in (-t, t])
    t: int
    n0: int
    rows: dict

    def n_of(self, D, r):
        return (D + r * r) // (4 * self.t)

    def get(self, D, r):
        return self.rows.get((D, canonical_r(r, self.t)), 0)

    @property
    def holomorphic(self):
        return all(c >= 0 for c in self.rows.values())

    def representative(self):
        # {(n, r): c} over rows with r >= 0
        return {(self.n_of(D, r), r): c for (D, r), c in self.rows.items() if r >= 0}

    def symmetrized(self):
        # representative part with its mirror r -> -r, as printed in listings
        out = {}
        for (n, r), c in self.representative().items():
            out[(n, r)] = c
            out[(n, -r)] = c
        return out

    def __str__(self):
        terms = []
        for (n, r), c in sorted(self.symmetrized().items(), key=lambda x: (-x[0][0], -x[0][1])):
            mono = ("q" if n == 1 else f"q^{n}" if n else "") + ("ζ" if r == 1 else f"ζ^{r}" if r else "")
            body = f"{abs(c) if abs(c) != 1 or not mono else ''}{mono}"
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms) or "0"
        return s[2:] if s.startswith("+ ") else s

    def to_json(self):
        rows = [{"D": D, "r": r, "n": self.n_of(D, r), "c": str(c)} for (D, r), c in sorted(self.rows.items())]
        return {"t": self.t, "n0": self.n0, "rows": rows}


def singular_table(psi, t, n0):
    """
    All coefficients of psi with 4tn - r^2 <= 0, reduced to (D, r mod 2t) classes.

    Every class has a representative with r in (-t, t] and n = (D + r^2)/(4t) <= t/4, so the window must reach
    q^floor(t/4).
    """
    t = int(t)
    qden = psi.qden
    if psi.trunc is not None and psi.trunc < (t // 4) * qden:
        raise TruncationError(f"window too small: singular table needs q^{t // 4}, psi is known to {psi.trunc / qden}")
    rows = {}
    for q, z2, c in psi.coefficients():
        if q % qden or z2 % 2:
            raise SeriesError(f"psi has a fractional exponent at q^{Fraction(q, qden)} zeta^{Fraction(z2, 2)}")
        n, r = q // qden, z2 // 2
        if not -t < r <= t or 4 * t * n - r * r > 0:
            continue
        if type(c) is not int:
            raise IntegralityError(f"singular coefficient c({n},{r}) = {c} is not an integer")
        if n < -n0:
            raise ArithmeticError(f"singular coefficient c({n},{r}) lies below the pole bound {-n0}")
        rows[(4 * t * n - r * r, r)] = c
    return SingularTable(t, n0, dict(sorted(rows.items())))


def invariance_violations(psi, t):
    """
    (n, r) where psi breaks c(n, r) = c(n, -r) or c(n, r) = c(n + lr + l^2 t, r + 2lt) for l = +-1 inside the window.

    Coefficients past trunc are not compared.
    """
    t, qden, bad = int(t), psi.qden, []
    for q, z2, c in psi.coefficients():
        if psi.row(q).coeff(-z2) != c:
            bad.append((Fraction(q, qden), Fraction(z2, 2)))
            continue
        for lam in (1, -1):
            q2 = q + lam * z2 * qden // 2 + t * qden
            if psi.trunc is not None and q2 > psi.trunc:
                continue
            if psi.row(q2).coeff(z2 + 4 * lam * t) != c:
                bad.append((Fraction(q, qden), Fraction(z2, 2)))
                break
    return bad


def weyl_vector(psi):
    """(A, B, C) with 24A = sum c(0,l), 2B = sum_{l>0} l c(0,l), 4C = sum l^2 c(0,l)."""
    if psi.trunc is not None and psi.trunc < 0:
        raise TruncationError("window too small: the q^0 row of psi is not computed")
    row = {z2 // 2: c for z2, c in psi.row(0).items()}
    A = Fraction(sum(row.values())) / 24
    B = Fraction(sum(l * c for l, c in row.items() if l > 0)) / 2
    C = Fraction(sum(l * l * c for l, c in row.items())) / 4
    return A, B, C


@dataclass(frozen=True)
class BorcherdsData:
    t: int
    A: Fraction
    B: Fraction
    C: Fraction
    D0: int
    D1: int
    weight: Fraction
    character_trivial: bool
    symmetric: bool
    holomorphic: bool

    @property
    def character_symbol(self):
        # exponents of eps^(24A) v_H^(2B) chi_F^(k + D0)
        return int(24 * self.A) % 24, int(2 * self.B) % 2, int(self.weight + self.D0) % 2

    def to_json(self):
        return {
            "t": self.t,
            "A": str(self.A),
            "B": str(self.B),
            "C": str(self.C),
            "D0": str(self.D0),
            "D1": str(self.D1),
            "weight": str(self.weight),
            "characterTrivial": self.character_trivial,
            "symmetric": self.symmetric,
            "holomorphic": self.holomorphic,
            "characterSymbol": list(self.character_symbol),
        }


def _integer(c, what):
    if isinstance(c, Fraction):
        if c.denominator != 1:
            raise IntegralityError(f"{what} = {c} is not an integer")
        return c.numerator
    return c


def borcherds_data(psi, t, v):
    """
    Weight, Weyl vector, D0, D1 and character data of Borch(psi); raises when t A - t D1 - C != 0.

    >>> from models.theta import ThetaBlockSpec
    >>> d = borcherds_data(build_psi(ThetaBlockSpec(18, (1, 1)), 0), 1, 1)
    >>> (d.A, d.C, d.D1, d.weight)
    (Fraction(1, 1), Fraction(1, 1), 0, Fraction(10, 1))
    """
    t = int(t)
    table = singular_table(psi, t, pole_bound(v))
    A, B, C = weyl_vector(psi)
    D0 = D1 = 0
    for q, p in psi.terms.items():
        if q >= 0:
            break
        n = -q // psi.qden
        D0 += int(divisor_sigma(n, 0)) * p.coeff(0)
        D1 += int(divisor_sigma(n, 1)) * sum(c for _, c in p.items())
    D0, D1 = _integer(D0, "D0"), _integer(D1, "D1")
    if t * A - t * D1 - C != 0:
        raise BorcherdsIdentityError(f"t A - t D1 - C = {t * A - t * D1 - C} != 0 (A={A}, C={C}, D1={D1}, t={t})")
    return BorcherdsData(
        t=t,
        A=A,
        B=B,
        C=C,
        D0=D0,
        D1=D1,
        weight=Fraction(psi.row(0).coeff(0)) / 2,
        character_trivial=A.denominator == 1 and C.denominator == 1 and C.numerator % t == 0,
        symmetric=D0 % 2 == 0,
        holomorphic=table.holomorphic,
    )


@dataclass(frozen=True)
class HumbertClass:
    # Humbert surface H_t(D, r) with the multiplicity of the divisor on it
    t: int
    D: int
    r: int
    multiplicity: int

    @property
    def primitive(self):
        # (n0, r0, m0) with m0 = 1, gcd 1 and discriminant r0^2 - 4 t n0 m0 = D
        return (self.r * self.r - self.D) // (4 * self.t), self.r, 1

    def __str__(self):
        m = "" if self.multiplicity == 1 else str(self.multiplicity)
        return f"{m}H_{self.t}({self.D},{self.r})"

    def to_json(self):
        n0, r0, m0 = self.primitive
        return {"t": self.t, "D": self.D, "r": self.r, "multiplicity": str(self.multiplicity), "T0": [n0, r0, m0]}


def humbert_multiplicity(table, D, r):
    # sum_{n >= 1} c(n^2 n0 m0, n r0) read through the (discriminant, class) table
    dmax = max((-x for x, _ in table.rows), default=0)
    total, n = 0, 1
    while n * n * D <= dmax:
        total += table.get(-n * n * D, n * r)
        n += 1
    return total


def humbert_divisor(table, t=None):
    """Humbert classes H_t(D, r), r in [0, t], carrying nonzero multiplicity, by descending D."""
    t = table.t if t is None else int(t)
    dmax = max((-x for x, _ in table.rows), default=0)
    out = []
    for D in range(dmax, 0, -1):
        for r in range(t + 1):
            if (r * r - D) % (4 * t):
                continue
            m = humbert_multiplicity(table, D, r)
            if m:
                out.append(HumbertClass(t, D, r, m))
    return out


def theta_block_from_row(psi):
    """Leading theta block eta^c(0,0) prod_{l>0} (theta_l/eta)^c(0,l) read off the q^0 row of psi."""
    row = {}
    for z2, c in psi.row(0).items():
        if z2 % 2:
            raise SeriesError("the q^0 row of psi has a fractional zeta-exponent")
        row[z2 // 2] = _integer(c, f"c(0,{z2 // 2})")
    mult = {}
    for l, c in row.items():
        if l <= 0:
            continue
        if c < 0:
            raise ValueError(f"c(0,{l}) = {c} < 0 would need a theta denominator")
        if row.get(-l, 0) != c:
            raise ArithmeticError(f"q^0 row of psi is not symmetric at zeta^{l}")
        mult[l] = c
    return ThetaBlockSpec.from_multiplicities(row.get(0, 0) - sum(mult.values()), mult)


def fj_psi_window(trunc, A, n0, M):
    # q-order of psi needed for Fourier-Jacobi entries through q^trunc after M xi-steps
    return max(0, M * (trunc - floor(A) + n0 * M))


def borch_fj_expansion(psi, t, M, trunc):
    """
    Fourier-Jacobi entries at indices C/t, ..., C/t + M of Borch(psi) = Theta * exp(-sum_j (psi|V_j) xi^(jt)).

    Theta is the leading theta block; V_j acts with weight 0. The exponential is expanded by
    m E_m = -sum_{j=1}^m j G_j E_{m-j}, which is exact over the rationals; every final coefficient must be integral.
    """
    qden = psi.qden
    t = int(t)
    A, B, C = weyl_vector(psi)
    if C.denominator != 1 or C.numerator % t:
        raise ArithmeticError(f"C = {C} is not a multiple of t = {t}")
    n0 = max(0, -(psi.valuation // qden)) if not psi.is_zero else 0
    lead = build_theta_block(theta_block_from_row(psi), trunc + n0 * M, qden)
    G = {j: apply_Vm(psi, 0, j) for j in range(1, M + 1)}
    E = [FJSeries.one(qden)]
    for m in range(1, M + 1):
        acc = FJSeries.zero(None, qden)
        for j in range(1, m + 1):
            acc = acc + (G[j] * E[m - j]).scale(j)
        E.append(acc.scale(Fraction(-1, m)))
    entries = []
    for j, e in enumerate(E):
        f = (lead * e).restrict(trunc * qden)
        if not f.is_integral():
            q, z2, c = next(x for x in f.coefficients() if type(x[2]) is not int)
            raise IntegralityError(f"Borcherds coefficient at q^{Fraction(q, qden)} zeta^{Fraction(z2, 2)} = {c}")
        if f.trunc is not None and f.trunc < trunc * qden:
            LOGGER.warning(f"WARNING ⚠️ FJ entry {C.numerator // t + j} known to q^{f.trunc / qden} only")
        entries.append((C.numerator // t + j, f))
    return FJExpansion(t, Fraction(psi.row(0).coeff(0), 2), tuple(entries))


def _monomial_into(dst, src, dq, dz, c, limit):
    for q, row in src.items():
        qq = q + dq
        if qq > limit:
            continue
        acc = dst.setdefault(qq, {})
        for z, v in row.items():
            acc[z + dz] = acc.get(z + dz, 0) + c * v


def borch_product_expansion(psi, t, M, trunc):
    """
    Fourier-Jacobi entries of q^A zeta^B xi^C prod (1 - q^n zeta^r xi^(tm))^c(nm, r) expanded directly.

    Factors run over m >= 0, with n >= 0 when m = 0 and r < 0 when m = n = 0. Intermediate products are cut at
    q^(trunc + n0 M): the remaining factors can lower the q-order by at most n0 per xi-step.
    """
    qden = psi.qden
    t = int(t)
    A, B, C = weyl_vector(psi)
    if C.denominator != 1 or C.numerator % t:
        raise ArithmeticError(f"C = {C} is not a multiple of t = {t}")
    if not psi.is_integral():
        raise IntegralityError("product exponents c(n, r) of psi must be integers")
    n0 = max(0, -(psi.valuation // qden)) if not psi.is_zero else 0
    W = (trunc + n0 * M) * qden
    need = M * (trunc + n0 * M) * qden
    if psi.trunc is not None and psi.trunc < need:
        raise TruncationError(f"window too small: product expansion needs psi to q^{need // qden}")

    row0 = psi.row(0).items()
    atoms = [AtomFactor(-1, 0, z2, c) for z2, c in row0 if z2 < 0]
    atoms += [AtomFactor(-1, n * qden, z2, c) for n in range(1, W // qden + 1) for z2, c in row0]
    a, b2 = A * qden, 2 * B
    if a.denominator != 1 or b2.denominator != 1:
        raise ArithmeticError(f"Weyl vector (A, B) = ({A}, {B}) is not representable with qden={qden}")
    base = expand_atom_product(atoms, W - int(a), qden).shift(int(a), int(b2))
    P = [{q: dict(p.terms) for q, p in base.terms.items()}] + [{} for _ in range(M)]

    for m in range(1, M + 1):
        for n in range(-(n0 // m), W // qden + 1):
            for z2, c in psi.row(n * m * qden).items():
                for j in range(M, m - 1, -1):  # descending so P[j - m s] is still the old value
                    for s in range(1, j // m + 1):
                        coeff = gbinom(c, s) * (-1) ** s
                        if coeff:
                            _monomial_into(P[j], P[j - m * s], n * s * qden, z2 * s, coeff, W)
    entries = []
    for j, raw in enumerate(P):
        f = FJSeries._from_raw(raw, trunc * qden, qden)
        if not f.is_integral():
            raise IntegralityError(f"Borcherds product entry {C.numerator // t + j} has non-integral coefficients")
        entries.append((C.numerator // t + j, f))
    return FJExpansion(t, Fraction(psi.row(0).coeff(0), 2), tuple(entries))


class FJEntryCheck(NamedTuple):
    m: int
    status: str  # equal, mismatch or missing
    location: Optional[tuple] = None  # (n, r, a, b) of the first mismatch


@dataclass(frozen=True)
class FJComparison:
    checks: tuple

    @property
    def equal(self):
        return all(c.status == "equal" for c in self.checks)

    def __str__(self):
        parts = []
        for c in self.checks:
            if c.status == "mismatch":
                n, r, x, y = c.location
                parts.append(f"m={c.m}: mismatch at q^{n} zeta^{r} ({x} != {y})")
            else:
                parts.append(f"m={c.m}: {c.status}")
        return "; ".join(parts)


def compare_fj(a, b, up_to):
    """Exact per-index comparison of two Fourier-Jacobi expansions through index up_to, on the common window."""
    if a.t != b.t:
        raise ValueError(f"index mismatch: {a.t} != {b.t}")
    checks = []
    for m in sorted(set(a.indices) | set(b.indices)):
        if m > up_to:
            continue
        if m not in a or m not in b:
            checks.append(FJEntryCheck(m, "missing"))
            continue
        fa, fb = a.entry(m), b.entry(m)
        T = _tmin(fa.trunc, fb.trunc)
        loc = None
        for q, z2 in sorted(fa.support() | fb.support()):
            if T is not None and q > T:
                break
            x, y = fa.row(q).coeff(z2), fb.row(q).coeff(z2)
            if x != y:
                loc = (Fraction(q, fa.qden), Fraction(z2, 2), x, y)
                break
        checks.append(FJEntryCheck(m, "equal" if loc is None else "mismatch", loc))
    return FJComparison(tuple(checks))


def build_psi_for_fj(spec, M, trunc, route="product", qden=QDEN):
    """psi with a window large enough for M xi-steps of the Fourier-Jacobi expansion through q^trunc."""
    # covers fj_psi_window for A >= 0 and the direct product window
    n0 = pole_bound(spec.v)
    return build_psi(spec, max(int(spec.t) // 4, M * (trunc + n0 * M)), route, qden)


def borch_expansion_for_spec(spec, fjmax, trunc, method="exp", route="product", qden=QDEN):
    """
    Fourier-Jacobi entries of Borch(psi) through index fjmax and q-order trunc.

    method 'exp' expands theta block * exp(-Grit(psi)), 'product' multiplies out the infinite product.
    """
    if method not in {"exp", "product"}:
        raise ValueError(f"method must be 'exp' or 'product', not {method!r}")
    t = int(spec.t)
    _, _, C = weyl_vector(build_psi(spec, t // 4, route, qden))
    steps = fjmax - C / t
    if steps < 0:
        raise ValueError(f"fjmax={fjmax} lies below the leading Fourier-Jacobi index {C / t}")
    psi = build_psi_for_fj(spec, int(steps), trunc, route, qden)
    return (borch_fj_expansion if method == "exp" else borch_product_expansion)(psi, t, int(steps), trunc)
