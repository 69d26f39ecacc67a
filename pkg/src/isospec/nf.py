"""Number-field arithmetic: defining polynomials, prime splitting, Dedekind
zeta at 2 by Euler products, covolumes of the orbifold pairs, the
representation-equivalence screen, balanced collections, and the finite/
infinite prime-set computation for torsion-homology comparison.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
import sympy
from sympy import Poly, Symbol

x = Symbol("x")


class FieldInputError(ValueError):
    pass


class UnsupportedConfigError(ValueError):
    pass


class PrecisionError(RuntimeError):
    pass


@dataclass
class NumberFieldSpec:
    coeffs: tuple  # ascending, monic
    degree: int
    signature: tuple
    poly_disc: int
    disc: int  # field discriminant = poly_disc / index_cofactor^2
    index_cofactor: int

    def poly(self):
        return Poly(list(reversed(self.coeffs)), x)

    def complex_roots(self, dps=30):
        mpmath.mp.dps = dps
        return mpmath.polyroots([int(c) for c in reversed(self.coeffs)], maxsteps=200, extraprec=80)


def parse_field(coeffs, index_cofactor=1, asserted_disc=None, asserted_signature=None) -> NumberFieldSpec:
    """Build a field description from an ascending-coefficient monic integer
    polynomial.  The caller asserts the index cofactor [Z_F : Z[alpha]]; the
    field discriminant is poly_disc / cofactor^2 and is cross-checked against
    any asserted value."""
    coeffs = [int(c) for c in coeffs]
    if coeffs[-1] != 1:
        raise FieldInputError("polynomial must be monic")
    f = Poly(list(reversed(coeffs)), x)
    n = f.degree()
    fac = sympy.factor_list(f.as_expr(), x)[1]
    if len(fac) != 1 or fac[0][1] != 1:
        raise FieldInputError("polynomial is reducible")
    pd = int(sympy.discriminant(f.as_expr(), x))
    r1 = len(sympy.real_roots(f.as_expr(), x))
    r2 = (n - r1) // 2
    if pd % (index_cofactor ** 2) != 0:
        raise FieldInputError("index cofactor does not divide the polynomial discriminant")
    d = pd // (index_cofactor ** 2)
    if asserted_disc is not None and d != asserted_disc:
        raise FieldInputError(f"field discriminant {d} != asserted {asserted_disc}")
    if asserted_signature is not None and (r1, r2) != tuple(asserted_signature):
        raise FieldInputError("signature mismatch")
    if (-1) ** r2 != (1 if d > 0 else -1):
        raise FieldInputError("discriminant sign inconsistent with signature")
    return NumberFieldSpec(tuple(coeffs), n, (r1, r2), pd, d, index_cofactor)


@dataclass
class SplittingData:
    p: int
    factors: list  # list of (e, f) pairs
    flagged: bool = False

    def check(self, degree):
        if sum(e * f for e, f in self.factors) != degree:
            raise FieldInputError("splitting degrees do not sum to the field degree")


def splitting_type(spec: NumberFieldSpec, p, overrides=None) -> SplittingData:
    """Splitting type of p from the factorization of f mod p; valid when p
    does not divide the index.  Overrides supply the truth at flagged primes."""
    p = int(p)
    if overrides and p in overrides:
        data = SplittingData(p, [tuple(ef) for ef in overrides[p]], flagged=False)
        data.check(spec.degree)
        return data
    flagged = spec.index_cofactor % p == 0
    if flagged:
        raise FieldInputError(
            f"prime {p} may divide the index; supply an override splitting"
        )
    fac = sympy.factor_list(spec.poly().as_expr(), x, modulus=p)[1]
    factors = [(mult, int(sympy.degree(g, x))) for g, mult in fac]
    data = SplittingData(p, factors)
    data.check(spec.degree)
    return data


# ---------------------------------------------------------------------------
# vectorized splitting degrees for the Euler product


def _sieve(limit):
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def _reduction_rows(coeffs, top):
    """x^k mod f for k = deg..top as integer coefficient rows (f monic)."""
    n = len(coeffs) - 1
    rows = {}
    cur = [-c for c in coeffs[:-1]]  # x^n
    rows[n] = list(cur)
    for k in range(n + 1, top + 1):
        nxt = [0] + cur[:-1]
        carry = cur[-1]
        if carry:
            nxt = [a - carry * c for a, c in zip(nxt, coeffs[:-1])]
        cur = nxt
        rows[k] = list(cur)
    return rows


class _VecPoly:
    """Per-prime polynomials of degree < n with vectorized arithmetic mod p."""

    def __init__(self, coeffs, primes):
        self.n = len(coeffs) - 1
        self.f = coeffs
        self.p = primes.astype(np.int64)
        self.red = _reduction_rows(coeffs, 2 * self.n - 2)

    def mul(self, A, B):
        n, m = self.n, len(self.p)
        prod = [np.zeros(m, dtype=np.int64) for _ in range(2 * n - 1)]
        for i in range(n):
            Ai = A[i]
            for j in range(n):
                prod[i + j] = (prod[i + j] + Ai * B[j]) % self.p
        out = [prod[i] % self.p for i in range(n)]
        for k in range(2 * n - 2, n - 1, -1):
            ck = prod[k]
            row = self.red[k]
            for i in range(n):
                if row[i]:
                    out[i] = (out[i] + ck * (row[i] % self.p)) % self.p
        return out

    def xpow_p(self):
        """x^p mod (f, p) for every prime simultaneously."""
        n, m = self.n, len(self.p)
        maxbits = int(self.p.max()).bit_length()
        result = [np.zeros(m, dtype=np.int64) for _ in range(n)]
        result[0][:] = 1  # the constant polynomial 1
        xpoly = [np.zeros(m, dtype=np.int64) for _ in range(n)]
        xpoly[1][:] = 1
        for bit in range(maxbits - 1, -1, -1):
            result = self.mul(result, result)
            mask = ((self.p >> bit) & 1).astype(bool)
            if mask.any():
                shifted = self.mul_by_x(result)
                for i in range(n):
                    result[i] = np.where(mask, shifted[i], result[i])
        return result

    def mul_by_x(self, A):
        n = self.n
        out = [np.zeros_like(A[0]) for _ in range(n)]
        for i in range(n - 1):
            out[i + 1] = A[i].copy()
        top = A[n - 1]
        row = self.red[n]
        for i in range(n):
            if row[i]:
                out[i] = (out[i] + top * (row[i] % self.p)) % self.p
        return out

    def compose(self, A, B):
        """A(B(x)) mod (f, p): Horner in the coefficient vectors of A."""
        n, m = self.n, len(self.p)
        out = [np.zeros(m, dtype=np.int64) for _ in range(n)]
        for i in range(n - 1, -1, -1):
            out = self.mul(out, B)
            out[0] = (out[0] + A[i]) % self.p
        return out


def _gcd_degree_counts(fcoeffs, primes, frob_powers):
    """deg gcd(x^{p^k} - x, f) mod p for each prime, per power k supplied."""
    n = len(fcoeffs) - 1
    m = len(primes)
    counts = []
    f_int = [int(c) for c in fcoeffs]
    for R in frob_powers:
        a = np.zeros(m, dtype=np.int64)
        cols = [np.asarray(R[i]) for i in range(n)]
        for idx in range(m):
            p = int(primes[idx])
            g = [int(cols[i][idx]) % p for i in range(n)]
            g[1] = (g[1] - 1) % p
            # gcd(f, g) over GF(p) for tiny degrees
            a[idx] = _gcd_deg_small(f_int, g, p)
        counts.append(a)
    return counts


def _gcd_deg_small(f, g, p):
    A = [c % p for c in f]
    B = list(g)
    while True:
        while B and B[-1] % p == 0:
            B.pop()
        if not B:
            degA = len(A) - 1
            return degA if degA > 0 or (A and A[0]) else 0
        inv = pow(B[-1], -1, p)
        dB = len(B) - 1
        while len(A) - 1 >= dB:
            while A and A[-1] % p == 0:
                A.pop()
            if len(A) - 1 < dB:
                break
            coef = (A[-1] * inv) % p
            shift = len(A) - 1 - dB
            for i in range(dB + 1):
                A[shift + i] = (A[shift + i] - coef * B[i]) % p
            A.pop()
        A, B = B, A
        if not B:
            return len(A) - 1


def _degree_pattern_from_counts(n, a):
    """Residue-degree multiset from a_k = #roots in F_{p^k}, k = 1..len(a)."""
    m = {}
    m[1] = a[0]
    if len(a) > 1:
        m[2] = (a[1] - a[0]) // 2
    if len(a) > 2:
        m[3] = (a[2] - a[0]) // 3
    used = sum(d * m.get(d, 0) for d in (1, 2, 3))
    left = n - used
    degs = []
    for d in (1, 2, 3):
        degs.extend([d] * m.get(d, 0))
    if left > 0:
        degs.append(left)  # a single residual prime (valid for degree <= 7)
    return degs


@dataclass
class Zeta2Result:
    value: float
    error: float
    prime_bound: int


def zeta2(spec: NumberFieldSpec, prime_bound=10 ** 7, overrides=None) -> Zeta2Result:
    """zeta_F(2) by the Euler product over p <= prime_bound with a rigorous
    tail bound.  Primes dividing disc(f) or the index are handled separately
    (overrides are required at index primes)."""
    if spec.degree > 7:
        raise UnsupportedConfigError("degree > 7 not supported by the splitting engine")
    P = int(prime_bound)
    primes = _sieve(P)
    bad = set()
    for p in sympy.factorint(abs(spec.poly_disc)):
        bad.add(int(p))
    for p in sympy.factorint(spec.index_cofactor):
        bad.add(int(p))
    log_total = 0.0
    # special primes: exact splitting with overrides allowed
    for p in sorted(bad):
        if p > P:
            continue
        data = splitting_type(spec, p, overrides=overrides)
        for e, f in data.factors:
            log_total -= math.log1p(-float(p) ** (-2 * f))
    good = primes[~np.isin(primes, sorted(bad))]
    n = spec.degree
    if n == 1:
        pf = good.astype(np.float64)
        log_total += float(-np.sum(np.log1p(-pf ** -2.0)))
    elif len(good):
        vp = _VecPoly(list(spec.coeffs), good)
        R1 = vp.xpow_p()
        powers = [R1]
        if n >= 4:
            R2 = vp.compose(R1, R1)
            powers.append(R2)
        if n >= 6:
            R3 = vp.compose(R2, R1)
            powers.append(R3)
        counts = _gcd_degree_counts(list(spec.coeffs), good, powers)
        a1 = counts[0]
        a2 = counts[1] if len(counts) > 1 else None
        a3 = counts[2] if len(counts) > 2 else None
        pf = good.astype(np.float64)
        contrib = np.zeros(len(good), dtype=np.float64)
        m1 = a1.astype(np.int64)
        contrib -= m1 * np.log1p(-pf ** -2.0)
        used = m1.copy()
        if a2 is not None:
            m2 = (a2 - a1) // 2
            contrib -= m2 * np.log1p(-pf ** -4.0)
            used += 2 * m2
        if a3 is not None:
            m3 = (a3 - a1) // 3
            contrib -= m3 * np.log1p(-pf ** -6.0)
            used += 3 * m3
        # the leftover is a single residual prime of degree > len(powers)
        left = n - used
        for d in range(len(powers) + 1, n + 1):
            mask = left == d
            if mask.any():
                contrib[mask] -= np.log1p(-pf[mask] ** (-2.0 * d))
        log_total += float(np.sum(contrib))
    # tail: log of the omitted factors is at most deg * sum_{p > P} p^-2 < deg/P
    tail = spec.degree / P
    round_err = 1e-12 * (len(primes) + 10)
    value = math.exp(log_total)
    err = value * (math.expm1(tail) + round_err)
    return Zeta2Result(value, err, P)


COVOLUME_CONFIG = "signature (r1,1), trivial level, division algebra ramified at exactly the real places"


def covolume(spec: NumberFieldSpec, zeta: Zeta2Result | None = None, prime_bound=10 ** 7,
             overrides=None, delta_D_norm=1, level_norm=1, ramified_at_all_real=True):
    """Volume of each orbifold in the pair: |d|^(3/2) zeta_F(2) / (2^(2r1+4) pi^(2r1+2)).

    Only the configuration appearing in the worked examples is supported:
    signature (r1, 1), trivial level and discriminant, D ramified at exactly
    the real places.  Anything else is refused rather than extrapolated.
    """
    r1, r2 = spec.signature
    if r2 != 1 or delta_D_norm != 1 or level_norm != 1 or not ramified_at_all_real:
        raise UnsupportedConfigError(f"covolume formula restricted to: {COVOLUME_CONFIG}")
    if zeta is None:
        zeta = zeta2(spec, prime_bound=prime_bound, overrides=overrides)
    scale = abs(spec.disc) ** 1.5 / (2 ** (2 * r1 + 4) * math.pi ** (2 * r1 + 2))
    return scale * zeta.value, scale * zeta.error


# ---------------------------------------------------------------------------
# representation-equivalence screen


def repequiv_criterion(scenario):
    """Screen for representation equivalence of the whole family.

    scenario keys:
      delta_D_finite_norms : list of norms of finite primes ramified in D
      d_real_ramification  : sorted list of real-place labels where D ramifies
      candidates           : per quadratic extension attached to a character
                             of C_iso off the annihilator, a dict with
                             real_ramification (list), odd_level_primes_split
                             (bool), ciso_class_primes_inert (bool)
    Returns ("representation-equivalent", reason) or ("inconclusive", reason).
    """
    if scenario.get("delta_D_finite_norms"):
        return (
            "representation-equivalent",
            "division algebra ramified at a finite prime: every admissible "
            "quadratic extension would need a single place above it, but its "
            "class is trivial so it splits",
        )
    d_real = sorted(scenario["d_real_ramification"])
    for cand in scenario.get("candidates", []):
        if sorted(cand["real_ramification"]) != d_real:
            continue
        if not cand.get("odd_level_primes_split", True):
            continue
        if not cand.get("ciso_class_primes_inert", True):
            continue
        return (
            "inconclusive",
            f"candidate extension {cand.get('name', '?')} is ramified at exactly "
            "the real places of the algebra; shady-character analysis required",
        )
    return (
        "representation-equivalent",
        "no admissible quadratic extension matches the real ramification of the algebra",
    )


# ---------------------------------------------------------------------------
# balanced collections


def balanced_collections(pairs):
    """All {0,1}-collections with q + q' = 1 on each matched pair of indices.

    pairs: list of (i, j) index pairs forming a perfect matching.
    Yields dict index -> 0/1; exactly 2^len(pairs) of them.
    """
    idxs = [i for pr in pairs for i in pr]
    if len(set(idxs)) != len(idxs):
        raise FieldInputError("pairing is not a perfect matching")
    for choice in itertools.product((0, 1), repeat=len(pairs)):
        h = {}
        for (i, j), c in zip(pairs, choice):
            h[i] = c
            h[j] = 1 - c
        yield h


def is_balanced(h, pairs):
    return all(h[i] + h[j] == 1 for i, j in pairs)


# ---------------------------------------------------------------------------
# the prime set S


@dataclass
class SSetResult:
    finite: bool
    primes: list = field(default_factory=list)
    witness: dict | None = None
    detail: str = ""


def _poly_eval_mod(num_coeffs, point_coeffs, modulus_poly):
    """Evaluate a rational polynomial at an algebraic element given by its
    polynomial, inside Q[y]/(modulus)."""
    acc = sympy.Poly(0, modulus_poly.gen)
    pt = sympy.Poly(point_coeffs, modulus_poly.gen)
    for c in num_coeffs:  # descending
        acc = (acc * pt + sympy.Poly(c, modulus_poly.gen)) % modulus_poly
    return acc


def _embed_in_compositum(u_coeffs, emb, g):
    """Image of an element of L (ascending coefficients in its primitive
    element) under an embedding into Q[y]/(g)."""
    y = g.gen
    acc = sympy.Poly(0, y)
    for c in reversed([sympy.Rational(cc) for cc in u_coeffs]):
        acc = (acc * emb + sympy.Poly(c, y)) % g
    return acc


def sset_exact(compositum_coeffs, embeddings, pairs, unit_polys, exponent_x=1,
               alpha_blocks=None, base_primes=()):
    """Exact path: everything happens in Q[y]/(g) for the supplied compositum.

    compositum_coeffs : ascending monic integer coefficients of g
    embeddings        : per tau, ascending coefficients of the image of the
                        primitive element of L in the compositum
    pairs             : conjugate pairing of the embeddings over the base
    unit_polys        : per unit generator, ascending coefficients over L
    alpha_blocks      : optional list of (alpha_poly, ideal_norm, order k) for
                        ramified-prime constraints
    """
    y = Symbol("y")
    g = sympy.Poly(list(reversed([int(c) for c in compositum_coeffs])), y)
    embs = [
        sympy.Poly(list(reversed([sympy.Rational(c) for c in e])), y) for e in embeddings
    ]

    def norm(elem):
        return sympy.Rational(sympy.resultant(g.as_expr(), elem.as_expr(), y))

    def h_product(coeffs, h):
        acc = sympy.Poly(1, y)
        for ti in range(len(embs)):
            if h[ti]:
                acc = (acc * _embed_in_compositum(coeffs, embs[ti], g)) % g
        return acc

    primes = set(int(p) for p in base_primes)
    for h in balanced_collections(pairs):
        values = [norm(h_product(u, h) - sympy.Poly(1, y)) for u in unit_polys]
        if all(v == 0 for v in values):
            return SSetResult(False, [], dict(h), "vanishing balanced collection")
        gc = 0
        for v in values:
            gc = math.gcd(gc, abs(int(v)))
        if alpha_blocks:
            for a_poly, qnorm, k in alpha_blocks:
                X = pow_poly(h_product(a_poly, h), 2 * exponent_x, g)
                t1 = X - sympy.Poly(int(qnorm) ** (2 * k * exponent_x), y)
                t2 = X - sympy.Poly(1, y)
                gc = math.gcd(gc, abs(int(norm((t1 * t2) % g))))
        for p in sympy.factorint(gc):
            primes.add(int(p))
    return SSetResult(True, sorted(primes), None, "all balanced collections obstructed")


def pow_poly(p, e, g):
    out = sympy.Poly(1, p.gen)
    base = p
    while e:
        if e & 1:
            out = (out * base) % g
        base = (base * base) % g
        e >>= 1
    return out


def _sorted_roots(coeffs, precision):
    mpmath.mp.dps = precision
    roots = mpmath.polyroots([int(c) for c in reversed(coeffs)], maxsteps=400, extraprec=160)
    return sorted(
        roots,
        key=lambda r: (round(float(mpmath.re(r)), 8), round(float(mpmath.im(r)), 8)),
    )


def sset_numeric(base_coeffs, rel_trace, rel_norm, units, base_primes=(),
                 dps=60, dps_check=120, retries=2):
    """Numeric path for the quadratic extension L = F(w), w^2 - t w + n = 0
    with t, n in F.  Embeddings of L are (base root a, quadratic root z);
    the conjugate pairing over F is z <-> t(a) - z.

    The product over all balanced collections of (prod tau(u)^{h_tau} - 1) is
    a rational integer (the collection set is stable under the Galois
    action); it is computed at two precisions with verified integer rounding.
    A collection vanishing for every generator certifies the infinite
    verdict; the finite-verdict prime list is a conservative union.

    units: list of coefficient grids c[i][j] for u = sum c[i][j] a^i z^j.
    """
    rel_trace = [Fraction(str(c)) for c in rel_trace]
    rel_norm = [Fraction(str(c)) for c in rel_norm]
    units = [
        [[Fraction(str(c)) for c in row] for row in u] for u in units
    ]

    def run(precision):
        roots = _sorted_roots(base_coeffs, precision)

        def evalp(coeffs, a):
            acc = mpmath.mpc(0)
            for c in reversed(coeffs):
                acc = acc * a + mpmath.mpf(c.numerator) / mpmath.mpf(c.denominator)
            return acc

        embs = []
        for a in roots:
            t = evalp(rel_trace, a)
            nn = evalp(rel_norm, a)
            sq = mpmath.sqrt(t * t - 4 * nn)
            embs.append((a, (t + sq) / 2, (t - sq) / 2))
        uvals = []
        for u in units:
            per = []
            for a, z1, z2 in embs:
                vals = []
                for z in (z1, z2):
                    acc = mpmath.mpc(0)
                    for i, row in enumerate(u):
                        for j, c in enumerate(row):
                            if c:
                                acc += (
                                    mpmath.mpf(c.numerator)
                                    / mpmath.mpf(c.denominator)
                                    * a ** i
                                    * z ** j
                                )
                    vals.append(acc)
                per.append(vals)
            uvals.append(per)
        npairs = len(embs)
        balanced = list(itertools.product((0, 1), repeat=npairs))
        vanish = []
        per_h = []
        for h in balanced:
            per_unit = []
            for uv in uvals:
                acc = mpmath.mpc(1)
                for k, pick in enumerate(h):
                    acc *= uv[k][pick]
                per_unit.append(acc - 1)
            per_h.append(per_unit)
            vanish.append(
                all(abs(v) < mpmath.mpf(10) ** (-precision // 2) for v in per_unit)
            )
        per_unit_products = []
        for j in range(len(units)):
            acc = mpmath.mpc(1)
            for per_unit in per_h:
                acc *= per_unit[j]
            per_unit_products.append(acc)
        return vanish, per_unit_products, balanced

    attempt = 0
    while True:
        try:
            v1, p1, balanced = run(dps)
            v2, p2, _ = run(dps_check)
            if v1 != v2:
                raise PrecisionError("vanishing pattern unstable between precisions")
            break
        except PrecisionError:
            attempt += 1
            if attempt > retries:
                raise
            dps *= 2
            dps_check *= 2
    for i, h in enumerate(balanced):
        if v1[i]:
            witness = {k: (pick, 1 - pick) for k, pick in enumerate(h)}
            return SSetResult(False, [], witness, "vanishing balanced collection")
    while True:
        ints = []
        ok = True
        for a, b in zip(p1, p2):
            ra = mpmath.nint(mpmath.re(a))
            rb = mpmath.nint(mpmath.re(b))
            if ra != rb or abs(mpmath.re(a) - ra) > 0.01 or abs(mpmath.im(a)) > 0.01:
                ok = False
                break
            ints.append(int(ra))
        if ok:
            break
        attempt += 1
        if attempt > retries:
            raise PrecisionError("integer rounding failed; increase precision")
        dps *= 2
        dps_check *= 2
        v1, p1, balanced = run(dps)
        v2, p2, _ = run(dps_check)
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    primes = set(int(p) for p in base_primes)
    if g == 0:
        raise PrecisionError("zero product without a vanishing collection")
    for p in sympy.factorint(g):
        primes.add(int(p))
    return SSetResult(True, sorted(primes), None, "no vanishing balanced collection")
