"""Point counting over F_{p^n}, Frobenius characteristic polynomials, the
cyclotomic unit-root bound, tritangent detection and the rank-1 certificate.

The counting kernel organises work by exact minimal degree d: for each d it
sweeps the plane over F_{p^d} once, slicing the affine chart by the first
coordinate.  The inner character sum along a slice is Frobenius-invariant, so
only one representative y per Frobenius orbit is evaluated, weighted by its
orbit size; this is the factor-of-n saving of orbit counting.  Each point's
exact degree is the lcm of the slice degree and the exact degree of the second
coordinate, so one sweep yields the per-degree tallies (A_d, B_d, Z_d) of
points with quadratic character +1, -1 and 0.  Every N_n then assembles from
the tallies of the divisors of n through the character transfer rule
chi_n = chi_d^(n/d).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lcm

import numpy as np

from .poly import ProjLine, TernaryForm, UniPoly, restrict_to_line, squarefree_decomposition
from .finitefield import FiniteField, fq, prime_field, quadratic_character
from .surface import K3Surface, is_smooth_curve, reduce_mod


class CountingError(ValueError):
    pass


class SignAmbiguous(ValueError):
    """Both functional-equation signs survive; another count is needed."""


class InconsistentCounts(ValueError):
    """No sign yields a polynomial with all root moduli equal to q."""


class RankInconclusive(RuntimeError):
    def __init__(self, leg: str, detail: str = ""):
        super().__init__(f"rank certificate inconclusive: {leg}" + (f" ({detail})" if detail else ""))
        self.leg = leg


# ---------------------------------------------------------------------------
# The counting kernel
# ---------------------------------------------------------------------------

def _int_coefficients_mod(f: TernaryForm, p: int) -> dict:
    out = {}
    for mon, c in f.terms.items():
        if hasattr(c, "field"):
            if c.field.characteristic != p:
                raise ValueError("form is defined over a different characteristic")
            c = c.field.encode(c)
        out[mon] = c % p
    return out


def _level_tallies(fcoef: dict, p: int, d: int) -> tuple[int, int, int]:
    """Tallies (A_d, B_d, Z_d) of exact-degree-d points of P^2 by the
    quadratic character of f, from one vectorised sweep of P^2(F_{p^d})."""
    field = fq(p, d)
    tables = field.tables
    q = tables.q
    ar = np.arange(q)
    counts = np.zeros((d + 1, 3), dtype=np.int64)
    lcmtab = np.zeros((d + 1, d + 1), dtype=np.int64)
    for e in range(1, d + 1):
        for dd in range(1, d + 1):
            lcmtab[e, dd] = lcm(e, dd)
    degz = tables.deg.copy()
    degz[0] = 1
    # chart x0 = 1: f(1, y, z) = sum_k c_k(y) z^k with c_k(y) = sum_j a[j,k] y^j
    ajk = {(e1, e2): c for (e0, e1, e2), c in fcoef.items()}
    chi = np.empty(q, dtype=np.int64)
    for y, e in tables.orbit_reps():
        ypow = [1]
        for _ in range(6):
            ypow.append(tables.smul(ypow[-1], y))
        ck = []
        for k in range(7):
            acc = 0
            for j in range(7 - k):
                c = ajk.get((j, k), 0)
                if c:
                    acc = tables.sadd(acc, tables.smul(c, ypow[j]))
            ck.append(acc)
        v = np.full(q, ck[6], dtype=np.int64)
        for k in range(5, -1, -1):
            v = tables.vmul(v, ar)
            if ck[k]:
                v = tables.vadd(v, np.full(q, ck[k], dtype=np.int64))
        lv = tables.log0[v]
        np.copyto(chi, 1 + (lv & 1))
        chi[v == 0] = 0
        key = lcmtab[e, degz] * 3 + chi
        counts += e * np.bincount(key, minlength=3 * (d + 1)).reshape(d + 1, 3)
    # chart x0 = 0, x1 = 1
    gz = [0] * 7
    for (e0, e1, e2), c in fcoef.items():
        if e0 == 0:
            gz[e2] = c
    v = np.full(q, gz[6], dtype=np.int64)
    for k in range(5, -1, -1):
        v = tables.vmul(v, ar)
        if gz[k]:
            v = tables.vadd(v, np.full(q, gz[k], dtype=np.int64))
    lv = tables.log0[v]
    np.copyto(chi, 1 + (lv & 1))
    chi[v == 0] = 0
    key = degz * 3 + chi
    counts += np.bincount(key, minlength=3 * (d + 1)).reshape(d + 1, 3)
    # the point [0:0:1]
    c001 = fcoef.get((0, 0, 6), 0)
    if c001 == 0:
        counts[1, 0] += 1
    elif pow(c001, (p - 1) // 2, p) == 1:
        counts[1, 1] += 1
    else:
        counts[1, 2] += 1
    z, a, b = counts[d]
    return int(a), int(b), int(z)


@dataclass
class CountSeries:
    """Exact point counts of w^2 = f over F_{p^n} for n = 1..max_n, with the
    per-exact-degree character tallies they assemble from (when computed by
    the kernel; fixture-backed series carry only the counts)."""

    p: int
    max_n: int
    counts: list[int]
    tallies: dict | None = None

    def __post_init__(self):
        for n, N in enumerate(self.counts, start=1):
            check_weil_bound(self.p, n, N)

    @classmethod
    def from_counts(cls, p: int, counts) -> "CountSeries":
        counts = [int(c) for c in counts]
        return cls(p=p, max_n=len(counts), counts=counts, tallies=None)


def check_weil_bound(p: int, n: int, N: int) -> None:
    if abs(N - 1 - p ** (2 * n)) > 22 * p**n:
        raise CountingError(f"count N_{n} = {N} violates the Weil bound at p = {p}")


def assemble_counts(p: int, tallies: dict, max_n: int) -> list[int]:
    out = []
    for n in range(1, max_n + 1):
        N = 0
        for d in range(1, n + 1):
            if n % d:
                continue
            A, B, Z = tallies[d]
            N += (A + B + Z) + A + ((1 if (n // d) % 2 == 0 else -1) * B)
        check_weil_bound(p, n, N)
        out.append(N)
    return out


def count_series(f: TernaryForm, p: int, max_n: int) -> CountSeries:
    """Counts N_1..N_max_n by the orbit kernel, sharing the per-degree sweeps."""
    if p == 2:
        raise CountingError("characteristic 2 is unsupported")
    if f.degree != 6:
        raise CountingError("the branch form must be a sextic")
    fcoef = _int_coefficients_mod(f, p)
    if not any(fcoef.values()):
        raise CountingError(f"form vanishes identically mod {p}")
    tallies = {d: _level_tallies(fcoef, p, d) for d in range(1, max_n + 1)}
    counts = assemble_counts(p, tallies, max_n)
    return CountSeries(p=p, max_n=max_n, counts=counts, tallies=tallies)


def _count_naive(f: TernaryForm, p: int, n: int) -> int:
    """Independent scalar count: enumerate P^2(F_{p^n}) and sum 1 + chi(f(P)).

    Plain field-element arithmetic, no tables and no orbit logic; the charts
    are swept with Horner in the last coordinate to keep this usable as a
    test oracle up to F_81.
    """
    field = fq(p, n)
    fcoef = _int_coefficients_mod(f, p)
    elems = list(field.elements())
    chi_of = {field.encode(v): quadratic_character(v) for v in elems}
    consts = {c: field.from_int(c) for c in set(fcoef.values())}
    zero = field.zero
    total = 0
    for y in elems:
        ypow = [field.one]
        for _ in range(6):
            ypow.append(ypow[-1] * y)
        ck = [zero] * 7
        for (e0, e1, e2), c in fcoef.items():
            ck[e2] = ck[e2] + consts[c] * ypow[e1]
        for z in elems:
            v = ck[6]
            for k in range(5, -1, -1):
                v = v * z + ck[k]
            total += 1 + chi_of[field.encode(v)]
    gz = [zero] * 7
    for (e0, e1, e2), c in fcoef.items():
        if e0 == 0:
            gz[e2] = consts[c]
    for z in elems:
        v = gz[6]
        for k in range(5, -1, -1):
            v = v * z + gz[k]
        total += 1 + chi_of[field.encode(v)]
    total += 1 + chi_of[field.encode(field.from_int(fcoef.get((0, 0, 6), 0)))]
    return total


def count_points(f: TernaryForm, p: int, n: int, strategy: str = "orbit") -> int:
    """N = #{P in P^2(F_{p^n})} weighted by 1 + chi(f(P)): the point count of
    the double cover w^2 = f."""
    if strategy == "naive":
        if p == 2:
            raise CountingError("characteristic 2 is unsupported")
        N = _count_naive(f, p, n)
        check_weil_bound(p, n, N)
        return N
    if strategy != "orbit":
        raise ValueError(f"unknown strategy {strategy!r}")
    return count_series(f, p, n).counts[n - 1]


# ---------------------------------------------------------------------------
# Frobenius characteristic polynomial
# ---------------------------------------------------------------------------

H2_DIM = 22  # middle cohomology dimension of a K3 surface


@dataclass
class FrobeniusData:
    q: int
    power_sums: list[int]
    coefficients: list[Fraction]  # a_0 .. a_22 of the monic charpoly
    sign: int

    @property
    def normalized(self) -> list[Fraction]:
        """Coefficients of f_3(t) = q^-22 f(q t): roots are eigenvalues / q."""
        q = Fraction(self.q)
        return [c * q ** (i - H2_DIM) for i, c in enumerate(self.coefficients)]


def _newton_coefficients(power_sums) -> dict[int, Fraction]:
    """Top charpoly coefficients a_22, a_21, ... from power sums via Newton's
    identities, in exact rationals."""
    a = {H2_DIM: Fraction(1)}
    for k in range(1, min(len(power_sums), H2_DIM) + 1):
        s = Fraction(power_sums[k - 1])
        for i in range(1, k):
            s += a[H2_DIM - i] * power_sums[k - i - 1]
        a[H2_DIM - k] = -s / k
    return a


def _weil_plausible(coefficients, q: int) -> bool:
    """Cheap pre-filter: root moduli within 30 percent of q.  A genuinely
    conform polynomial always passes (double-precision scatter of a root of
    multiplicity up to 22 stays below that), so this only discards."""
    roots = np.roots([float(c) for c in coefficients][::-1])
    return bool(np.all(np.abs(np.abs(roots) - q) <= 0.3 * q))


def _weil_conform(coefficients, q: int, rel_tol: float = 1e-6) -> bool:
    """All roots of modulus q, via companion-matrix eigenvalues of the exact
    squarefree part (repeated roots scatter numerically far beyond any usable
    tolerance, so multiplicities are removed exactly first)."""
    poly = UniPoly([Fraction(c) for c in coefficients])
    try:
        sqfree = [fac for fac, _ in squarefree_decomposition(poly)]
    except (ZeroDivisionError, ValueError):
        return False
    prod = UniPoly([Fraction(1)])
    for fac in sqfree:
        prod = prod * fac
    cs = [float(c) for c in prod.coeffs]
    roots = np.roots(cs[::-1])
    return bool(np.all(np.abs(np.abs(roots) - q) <= q * rel_tol))


def _complete_with_sign(a_top: dict[int, Fraction], eps: int, q: int):
    """Fill the lower half by the functional equation a_i = eps q^(22-2i)
    a_{22-i}; return None if a coefficient stays undetermined, or raise
    InconsistentCounts on an overdetermined mismatch within this sign."""
    coeffs: list[Fraction | None] = [None] * (H2_DIM + 1)
    for i, v in a_top.items():
        coeffs[i] = v
    for i in range(H2_DIM + 1):
        j = H2_DIM - i
        if a_top.get(j) is None:
            continue
        mirrored = eps * Fraction(q) ** (H2_DIM - 2 * i) * a_top[j]
        if coeffs[i] is None:
            coeffs[i] = mirrored
        elif coeffs[i] != mirrored:
            return "inconsistent"
    if any(c is None for c in coeffs):
        return None
    return coeffs


def _plus_sign_feasibility(a_top: dict[int, Fraction], q: int):
    """Decide whether some value of the undetermined middle coefficient makes
    the + sign Weil-conform.

    With the + sign the polynomial is prod (T^2 - gamma_i T + q^2) and
    conformance is equivalent to h(u) = prod (u - gamma_i) having all eleven
    roots real in [-2q, 2q].  Writing h = w + h_0 with h_0 the one unknown,
    the value y = -h_0 must satisfy the exact necessary window
    w(-2q) <= y <= w(2q); when the critical points of w are numerically clean
    the window sharpens to [max minima, min maxima].  An empty exact window
    rejects the sign rigorously; a small window yields integer candidates to
    test; anything else is left to an extra count.

    Returns ("infeasible", None), ("candidates", list of integer a_11) or
    ("unknown", None).
    """
    h = {11: Fraction(1)}
    for m in range(10, 0, -1):
        val = a_top[11 + m]
        j = 1
        while m + 2 * j <= 11:
            val -= h[m + 2 * j] * comb(m + 2 * j, j) * Fraction(q) ** (2 * j)
            j += 1
        h[m] = val
    w = UniPoly([Fraction(0)] + [h[k] for k in range(1, 11)] + [Fraction(1)])
    B = 2 * q
    w_lo = w.evaluate(Fraction(-B))
    w_hi = w.evaluate(Fraction(B))
    if w_lo > w_hi:
        return "infeasible", None
    integral = all(hh.denominator == 1 for hh in h.values())
    # numeric sharpening through the critical points of w
    wp = [float(k * h.get(k, Fraction(1))) if k <= 10 else 11.0 for k in range(1, 12)]
    crit = np.roots(wp[::-1])
    scale = 1.0 + np.abs(crit.real)
    clean = not np.any(np.abs(crit.imag) > 1e-9 * scale)
    cr = np.sort(crit.real)
    if clean and len(cr) > 1:
        clean = float(np.min(np.diff(cr))) > 1e-6 * (1.0 + float(np.max(np.abs(cr))))
    window = None
    if clean:
        if np.any(np.abs(cr) > B * (1 + 1e-6)):
            # eleven roots in the window force all ten criticals inside it
            return "infeasible", None
        wf = np.poly1d([float(c) for c in w.coeffs[::-1]])
        vals = wf(cr)
        lo = max(list(vals[1::2]) + [float(w_lo)])
        hi = min(list(vals[0::2]) + [float(w_hi)])
        if lo > hi + 1e-3 * max(1.0, abs(lo), abs(hi)):
            return "infeasible", None
        window = (lo, hi)
    if not integral:
        return "unknown", None
    if window is None:
        window = (float(w_lo), float(w_hi))
    import math

    y_lo, y_hi = math.floor(window[0] - 1), math.ceil(window[1] + 1)
    if y_hi - y_lo > 600:
        return "unknown", None
    shift = sum(h[2 * j] * comb(2 * j, j) * Fraction(q) ** (2 * j) for j in range(1, 6))
    return "candidates", [int(-y + shift) for y in range(y_lo, y_hi + 1)]


def frobenius_charpoly(counts: CountSeries) -> FrobeniusData:
    """Reconstruct the degree-22 Frobenius characteristic polynomial from the
    count series, selecting the functional-equation sign by the root-modulus
    (Weil) test."""
    if counts.max_n < 10:
        raise CountingError("need counts to n = 10 for a one-sided functional equation")
    q = counts.p
    t = [counts.counts[k - 1] - 1 - q ** (2 * k) for k in range(1, counts.max_n + 1)]
    a_top = _newton_coefficients(t)
    survivors = []
    plus_unknown = False
    for eps in (-1, 1):
        a_eps = dict(a_top)
        if eps == -1:
            if 11 not in a_eps:
                a_eps[11] = Fraction(0)
            elif a_eps[11] != 0:
                continue  # the minus sign forces a_11 = 0
        filled = _complete_with_sign(a_eps, eps, q)
        if filled == "inconsistent":
            continue
        if filled is None:
            verdict, cands = _plus_sign_feasibility(a_top, q)
            if verdict == "infeasible":
                continue
            if verdict == "unknown":
                plus_unknown = True
                continue
            for a11 in cands:
                a_try = dict(a_top)
                a_try[11] = Fraction(a11)
                filled_try = _complete_with_sign(a_try, eps, q)
                if filled_try in (None, "inconsistent"):
                    continue
                if _weil_plausible(filled_try, q) and _weil_conform(filled_try, q):
                    survivors.append((eps, filled_try))
                    break
            continue
        if _weil_conform(filled, q):
            survivors.append((eps, filled))
    if plus_unknown:
        raise SignAmbiguous("sign ambiguous, need N_11")
    if not survivors:
        raise InconsistentCounts("count series inconsistent: no Weil-conform sign")
    if len(survivors) > 1:
        raise SignAmbiguous("sign ambiguous, need N_11")
    eps, coeffs = survivors[0]
    return FrobeniusData(q=q, power_sums=t, coefficients=coeffs, sign=eps)


# ---------------------------------------------------------------------------
# Cyclotomic unit-root bound
# ---------------------------------------------------------------------------

def euler_phi(d: int) -> int:
    out = d
    m = d
    f = 2
    while f * f <= m:
        if m % f == 0:
            out -= out // f
            while m % f == 0:
                m //= f
        f += 1
    if m > 1:
        out -= out // m
    return out


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(d: int) -> UniPoly:
    """Phi_d over Z by exact division of x^d - 1."""
    poly = UniPoly([-1] + [0] * (d - 1) + [1])
    for e in range(1, d):
        if d % e == 0:
            poly = poly.exact_div(cyclotomic_polynomial(e))
    return poly


@functools.lru_cache(maxsize=1)
def _cyclotomic_degrees_up_to_22() -> list[int]:
    # phi(d) <= 22 forces d <= 2 * 22^2; the actual maximum is 66
    return [d for d in range(1, 2 * 22 * 22 + 1) if euler_phi(d) <= 22]


def unit_root_bound(fd: FrobeniusData) -> int:
    """Number of normalized Frobenius eigenvalues that are roots of unity,
    counted with multiplicity: an upper bound for the geometric Picard rank
    of the reduction."""
    g = UniPoly(fd.normalized)
    bound = 0
    for d in _cyclotomic_degrees_up_to_22():
        phi = cyclotomic_polynomial(d).map_coefficients(Fraction)
        while True:
            quo, rem = divmod(g, phi)
            if rem.is_zero() and not quo.is_zero():
                bound += phi.degree
                g = quo
            else:
                break
    return bound


# ---------------------------------------------------------------------------
# Tritangent lines
# ---------------------------------------------------------------------------

@dataclass
class TritangentScan:
    prime: int
    line: ProjLine | None
    degenerate_lines: list[ProjLine]
    lines_scanned: int


def enumerate_lines(field: FiniteField):
    """All p^2 + p + 1 lines of the dual plane in normalized lex order."""
    one, zero = field.one, field.zero
    for a in range(field.order):
        ea = field.decode(a)
        for b in range(field.order):
            yield ProjLine(one, ea, field.decode(b))
    for b in range(field.order):
        yield ProjLine(zero, one, field.decode(b))
    yield ProjLine(zero, zero, one)


def _is_square_binary_form(g: UniPoly, degree: int) -> bool:
    """Is the binary form with dehomogenisation g (and degree ``degree``) a
    nonzero constant times a perfect square?"""
    inf_mult = degree - g.degree
    if inf_mult % 2:
        return False
    if g.degree == 0:
        return True
    return all(m % 2 == 0 for _, m in squarefree_decomposition(g))


def tritangent_scan(f: TernaryForm, p: int) -> TritangentScan:
    """Scan every line of P^2(F_p) for tritangency: the restriction of f must
    be a nonzero constant times a perfect square."""
    field = prime_field(p)
    ff = f if hasattr(next(iter(f.terms.values())), "field") else reduce_mod(f, field)
    degenerate = []
    scanned = 0
    for line in enumerate_lines(field):
        scanned += 1
        g, _inf = restrict_to_line(ff, line)
        if g.is_zero():
            degenerate.append(line)
            continue
        if _is_square_binary_form(g, ff.degree):
            return TritangentScan(prime=p, line=line, degenerate_lines=degenerate, lines_scanned=scanned)
    return TritangentScan(prime=p, line=None, degenerate_lines=degenerate, lines_scanned=scanned)


def find_tritangent(f: TernaryForm, p: int) -> ProjLine | None:
    return tritangent_scan(f, p).line


# ---------------------------------------------------------------------------
# The rank-1 certificate
# ---------------------------------------------------------------------------

@dataclass
class RankCertificate:
    p: int
    p_prime: int
    tritangent_line: ProjLine
    unit_root_bound: int
    counts: CountSeries
    charpoly: FrobeniusData
    rank: int = 1


def certify_rank_one(
    X: K3Surface,
    p: int,
    p_prime: int,
    counts: CountSeries | None = None,
    depth: int = 10,
) -> RankCertificate:
    """Geometric Picard rank 1, from a tritangent line and unit-root bound 2
    at p together with tritangent absence at p_prime."""
    if p == p_prime:
        raise ValueError("the two primes must be distinct")
    if p == 2 or p_prime == 2:
        raise ValueError("both primes must be odd")
    f = X.branch_sextic
    for prime in (p, p_prime):
        if not is_smooth_curve(reduce_mod(f, prime_field(prime))):
            raise RankInconclusive("good-reduction", f"branch curve is singular mod {prime}")
    line = find_tritangent(f, p)
    if line is None:
        raise RankInconclusive("tritangent-at-p", f"no tritangent line mod {p}")
    if counts is None:
        counts = count_series(f, p, depth)
    fd = frobenius_charpoly(counts)
    bound = unit_root_bound(fd)
    if bound != 2:
        raise RankInconclusive("unit-root-bound", f"bound is {bound}, need 2")
    other = find_tritangent(f, p_prime)
    if other is not None:
        raise RankInconclusive("tritangent-at-p-prime", f"tritangent line exists mod {p_prime}")
    return RankCertificate(
        p=p,
        p_prime=p_prime,
        tritangent_line=line,
        unit_root_bound=bound,
        counts=counts,
        charpoly=fd,
    )
