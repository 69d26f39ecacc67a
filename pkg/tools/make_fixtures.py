#!/usr/bin/env python3
"""Build the checked-in character-group dumps, scenarios, and expected files
from the published tables, with exact internal consistency.

The construction freezes: the integer k tables and minus-subgroup combos as
printed; an integral Galois involution compatible with them; decimal t tables
within 1e-3 of the printed values that satisfy the involution identities
exactly and hit the published eigenvalue lists; and the exact s-kernel.
Everything is re-validated through the public loader before writing.
"""

import json
import os
import sys
from fractions import Fraction

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import sympy

from isospec.lattice import (
    from_columns,
    lattices_equal,
    mat_mul,
    mat_vec,
    solve_integer,
)
from isospec import hecke
from isospec.hecke import (
    HeckeCharGroupDump,
    classify_shady,
    count_shady_upto,
    minus_subgroup,
    non_isospectral_certificate,
)

OUT = os.path.join(os.path.dirname(__file__), "..", "src", "isospec", "fixtures")

F = Fraction
WINDOW = F(99, 100000)  # 9.9e-4 against printed tables


def fr(s):
    return F(str(s))


def frac_to_dec(x: Fraction) -> str:
    if x == 0:
        return "0"
    sign = "-" if x < 0 else ""
    x = abs(x)
    den = x.denominator
    k = 0
    while den % 10 == 0:
        den //= 10
        k += 1
    while den % 2 == 0:
        den //= 2
        k += 1
        x = x * 5 / 5  # keep exact; scaling handled below
    # safer: find k with x * 10^k integral
    k = 0
    y = x
    while y.denominator != 1:
        y *= 10
        k += 1
        if k > 40:
            raise ValueError(f"not a decimal fraction: {x}")
    digits = str(y.numerator).rjust(k + 1, "0")
    if k == 0:
        return sign + digits
    return sign + (digits[:-k] or "0") + "." + digits[-k:]


def sigma_permutations(places):
    labels = [e for p in places for e in p["embeddings"]]
    idx = {l: i for i, l in enumerate(labels)}
    perm = list(range(len(labels)))
    sign = [1] * len(labels)
    for p in places:
        if p["kind"] == "real-ramified":
            sign[idx[p["embeddings"][0]]] = -1
        else:
            a, b = idx[p["embeddings"][0]], idx[p["embeddings"][1]]
            perm[a], perm[b] = b, a
            if p.get("conjugate_pair"):
                sign[a] = -1
                sign[b] = -1
    return labels, perm, sign


def integer_inverse(M):
    s = sympy.Matrix(M)
    inv = s.inv()
    return [[int(inv[i, j]) for j in range(inv.cols)] for i in range(inv.rows)]


def complete_basis(cols, r):
    """A unimodular completion: returns complement columns extending the
    saturated column set to a basis of Z^r."""
    from isospec.lattice import _row_hnf

    M = from_columns(cols, nrows=r)
    H, U = _row_hnf(M)  # H = U * M, pivots 1 for a saturated system
    m = len(cols)
    for i in range(m):
        if H[i][i] != 1 or any(H[i][j] != 0 for j in range(m) if j != i):
            raise ValueError("combos are not saturated or not echelon-complete")
    Uinv = integer_inverse(U)
    return [ [Uinv[i][j] for i in range(r)] for j in range(m, r) ]


def build_sigma(K, Tprint, combos, places, r):
    """Integral involution with minus lattice exactly the printed combos and
    the printed Galois action on the k table.  Among the valid corrections
    for each complement vector (they differ by the angular kernel of the
    minus lattice) the one closest to the printed t data is chosen."""
    labels, perm, sign = sigma_permutations(places)
    for c in combos:
        kv = mat_vec(K, c)
        for i in range(len(labels)):
            if perm[i] != i:
                assert sign[i] * kv[perm[i]] == -kv[i], (c, i)
    comp = complete_basis(combos, r)
    KL = [[mat_vec(K, c)[i] for c in combos] for i in range(len(labels))]
    from isospec.lattice import kernel_basis

    ker = kernel_basis(KL)  # coefficient vectors over the combos
    # antisymmetrized t-values of the printed minus basis
    minus_t = []
    for c in combos:
        w = mat_vec(Tprint, c)
        vals = [F(0)] * len(labels)
        for i in range(len(labels)):
            if perm[i] != i and i < perm[i]:
                a = (w[i] - w[perm[i]]) / 2
                vals[i] = a
                vals[perm[i]] = -a
        minus_t.append(vals)

    def ell_t(coeffs):
        return [
            sum(F(coeffs[j]) * minus_t[j][i] for j in range(len(combos)))
            for i in range(len(labels))
        ]

    corr = []
    for u in comp:
        ku = mat_vec(K, u)
        rhs = [ku[i] - sign[i] * ku[perm[i]] for i in range(len(labels))]
        sol = solve_integer(KL, rhs)
        if sol is None:
            raise ValueError("no integral correction for complement vector")
        wu = mat_vec(Tprint, u)
        anti = [F(0)] * len(labels)
        for i in range(len(labels)):
            if perm[i] != i:
                anti[i] = (wu[i] - wu[perm[i]]) / 2

        def mismatch(coeffs):
            lt = ell_t(coeffs)
            return max(abs(lt[i] / 2 - anti[i]) for i in range(len(labels)))

        best = (mismatch(sol), tuple(sol))
        import itertools as it

        ranges = [range(-40, 41)] * len(ker)
        if len(ker) <= 2:
            for ns in it.product(*ranges):
                cand = [a + sum(n * k[j] for n, k in zip(ns, ker)) for j, a in enumerate(sol)]
                mm = mismatch(cand)
                if mm < best[0]:
                    best = (mm, tuple(cand))
        if best[0] > F(6, 1000):
            raise ValueError(f"correction mismatch too large: {float(best[0])}")
        corr.append(list(best[1]))
    m = len(combos)
    n_u = len(comp)
    B = from_columns([list(c) for c in combos] + [list(u) for u in comp], nrows=r)
    Binv = integer_inverse(B)
    Sb = [[0] * r for _ in range(r)]
    for i in range(m):
        Sb[i][i] = -1
    for j in range(n_u):
        Sb[m + j][m + j] = 1
        for i in range(m):
            Sb[i][m + j] = -corr[j][i]
    sigma = mat_mul(mat_mul(B, Sb), Binv)
    ident = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    assert mat_mul(sigma, sigma) == ident
    KS = mat_mul(K, sigma)
    for i in range(len(labels)):
        for j in range(r):
            assert KS[i][j] == sign[i] * K[perm[i]][j], (i, j)
    A = [[sigma[i][j] + (1 if i == j else 0) for j in range(r)] for i in range(r)]
    kerA = kernel_basis(A)
    assert lattices_equal(
        from_columns(kerA, nrows=r), from_columns([list(c) for c in combos], nrows=r)
    ), "minus lattice of sigma differs from the printed combos"
    return sigma, B, Binv, comp, corr


def _round8(x: Fraction) -> Fraction:
    return F(round(x * 10 ** 8), 10 ** 8)


def adjust_print_table(Tprint, combos, places, minus_targets):
    """Minimal entrywise adjustment of the printed t table so that every
    printed minus combo has exactly antisymmetric values (zero at real
    places under a complex place), with the eigenvalue-list targets imposed.

    Least-squares correction per row, rounded to 8 decimals, then made exact
    on pivot entries.  Returns the adjusted table.
    """
    labels, perm, sign = sigma_permutations(places)
    nrow = len(labels)
    r = len(Tprint[0])
    m = len(combos)
    # prescribed values v[i][l] of (row_i . combo_l)
    v = [[F(0)] * m for _ in range(nrow)]
    for i in range(nrow):
        for l, c in enumerate(combos):
            if perm[i] == i:
                v[i][l] = F(0)
            else:
                j = perm[i]
                a = (mat_vec([Tprint[i]], c)[0] - mat_vec([Tprint[j]], c)[0]) / 2
                v[i][l] = _round8(a)
    for (l, lbl), tv in minus_targets.items():
        i = labels.index(lbl)
        v[i][l] = tv
        v[perm[i]][l] = -tv
    A = [[F(c[j]) for j in range(r)] for c in combos]  # m x r
    AAt = [[sum(A[a][k] * A[b][k] for k in range(r)) for b in range(m)] for a in range(m)]
    AAt_inv = sympy.Matrix([[sympy.Rational(x) for x in row] for row in AAt]).inv()
    Tadj = [list(row) for row in Tprint]
    for i in range(nrow):
        resid = [v[i][l] - sum(F(Tadj[i][k]) * A[l][k] for k in range(r)) for l in range(m)]
        y = [sum(F(sympy.nsimplify(AAt_inv[a, b])) * resid[b] for b in range(m)) for a in range(m)]
        delta = [sum(y[l] * A[l][k] for l in range(m)) for k in range(r)]
        row = [_round8(Tadj[i][k] + delta[k]) for k in range(r)]
        # exact repair on pivot entries, constraints ordered acyclically
        pivots = _choose_pivots(combos)
        for l in pivots:
            pcol, coef = pivots[l]
            cur = sum(row[k] * A[l][k] for k in range(r))
            err = v[i][l] - cur
            if err != 0:
                row[pcol] = row[pcol] + err / coef
        for l in range(m):
            assert sum(row[k] * A[l][k] for k in range(r)) == v[i][l]
        Tadj[i] = row
    for i in range(nrow):
        for k in range(r):
            if abs(Tadj[i][k] - Tprint[i][k]) > WINDOW:
                raise ValueError(
                    f"print adjustment too large at row {labels[i]} col {k}: "
                    f"{float(Tadj[i][k])} vs {float(Tprint[i][k])}"
                )
    return Tadj


def _choose_pivots(combos):
    """Per combo, a pivot column with coefficient +-1 or +-2, ordered so that
    later constraints may touch earlier pivots but not vice versa."""
    m = len(combos)
    chosen = {}
    used = set()
    order = sorted(range(m), key=lambda l: sum(1 for x in combos[l] if x))
    for l in order:
        cand = [k for k, x in enumerate(combos[l]) if x and abs(x) <= 2 and k not in used]
        # prefer columns absent from other combos
        cand.sort(key=lambda k: sum(1 for l2 in range(m) if l2 != l and combos[l2][k]))
        if not cand:
            raise ValueError("no pivot available")
        k = cand[0]
        chosen[l] = (k, F(combos[l][k]))
        used.add(k)
    # verify acyclicity: pivot of l must not appear in combos processed later
    seq = list(chosen)
    for idx, l in enumerate(seq):
        k, _ = chosen[l]
        for l2 in seq[idx + 1 :]:
            if combos[l2][k]:
                # reorder: solve l after l2
                seq.remove(l)
                seq.insert(seq.index(l2) + 1, l)
                break
    return {l: chosen[l] for l in seq}


def build_t(Tadj, combos, comp, corr, Binv, places, Tprint):
    """Assemble the final table: antisymmetric values on the minus basis from
    the adjusted print table; on a complement vector u with sigma(u) = u - l
    the antisymmetric part is t(l)/2 and the symmetric part follows the
    adjusted print values."""
    labels, perm, sign = sigma_permutations(places)
    nrow = len(labels)
    r = len(Tadj[0])
    cols_basis = []
    for c in combos:
        w = mat_vec(Tadj, c)
        cols_basis.append(list(w))
        # exact antisymmetry is guaranteed by the adjustment
        for i in range(nrow):
            if perm[i] == i:
                assert w[i] == 0
            else:
                assert w[i] == -w[perm[i]]
    for u, cu in zip(comp, corr):
        w = mat_vec(Tadj, u)
        ell_t = [sum(F(cu[jj]) * cols_basis[jj][i] for jj in range(len(combos)))
                 for i in range(nrow)]
        vals = [F(0)] * nrow
        for i in range(nrow):
            if perm[i] == i:
                vals[i] = w[i]
            elif i < perm[i]:
                a = (w[i] + w[perm[i]]) / 2
                vals[i] = a + ell_t[i] / 2
                vals[perm[i]] = a + ell_t[perm[i]] / 2
        cols_basis.append(vals)
    Tb = from_columns(cols_basis, nrows=nrow)
    Tstd = mat_mul(Tb, Binv)
    worst = F(0)
    for i in range(nrow):
        for j in range(r):
            dev = abs(Tstd[i][j] - Tprint[i][j])
            worst = max(worst, dev)
            if dev > WINDOW:
                raise ValueError(
                    f"t window violated at row {labels[i]}, column {j}: "
                    f"{float(Tstd[i][j])} vs printed {float(Tprint[i][j])} "
                    f"(dev {float(dev)})"
                )
    print(f"   worst t deviation from print: {float(worst):.2e}")
    return Tstd


def make_dump(name, field_F, field_L, places, K, Tprint, combos, s_kernel,
              minus_targets=None, err="1e-6"):
    labels = [e for p in places for e in p["embeddings"]]
    r = len(K[0])
    Tadj = adjust_print_table(Tprint, combos, places, minus_targets or {})
    sigma, B, Binv, comp, corr = build_sigma(K, Tadj, combos, places, r)
    Tstd = build_t(Tadj, combos, comp, corr, Binv, places, Tprint)
    basis = []
    for j in range(r):
        basis.append({
            "name": f"psi{j + 1}",
            "k": {labels[i]: K[i][j] for i in range(len(labels))},
            "t": {labels[i]: {"value": frac_to_dec(Tstd[i][j]), "err": err}
                  for i in range(len(labels))},
            "conductor_norm": "1",
        })
    data = {
        "schema": "hcg-1",
        "name": name,
        "field_F": field_F,
        "field_L": field_L,
        "places": places,
        "rank": r,
        "torsion": [],
        "basis": basis,
        "sigma_matrix": sigma,
        "s_kernel": [list(c) for c in s_kernel],
        "conductor_bound_norm": "1",
        "precision": err,
    }
    dump = HeckeCharGroupDump(json.loads(json.dumps(data)))
    # printed minus lattice must be exactly the sigma minus lattice
    got = minus_subgroup(dump)
    assert lattices_equal(
        from_columns(got, nrows=r), from_columns([list(c) for c in combos], nrows=r)
    )
    return data, dump


# ---------------------------------------------------------------------------
# fixture definitions


def fixture_small_iso():
    places = [
        {"label": "v1", "kind": "complex", "ramified_in_D": False, "embeddings": ["tau1", "tau2"]},
        {"label": "v2", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau3"]},
        {"label": "v3", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau4"]},
    ]
    K = [
        [2, -2, 0, -3, 1, 1, -2],
        [-2, 2, 2, 3, -2, 0, 0],
        [4, -9, -2, -10, 5, 3, -1],
        [-4, 9, 2, 12, -6, -4, 3],
    ]
    T = [
        ["0", "0", "0", "-0.898", "-0.367", "-0.367", "1.149"],
        ["0", "0", "0", "0.898", "-1.265", "-1.265", "-1.149"],
        ["0", "0", "-0.611", "0", "-0.015", "1.647", "-0.525"],
        ["0", "0", "0.611", "0", "1.647", "-0.015", "0.525"],
    ]
    T = [[fr(v) for v in row] for row in T]
    combos = [
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, -1, 0, 1, -1, -2],
    ]
    s_kernel = [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0]]
    field_F = {
        "poly": [-4, 4, 1, -1, 1], "label": "4.2.1375.1", "disc": -1375,
        "signature": [2, 1], "index_cofactor": 4,
    }
    field_L = {
        "description": "cyclotomic quadratic extension by a 10th root of unity",
        "rel_trace": ["-1/2", "1/4", "-1/4", "-1/4"], "rel_norm": ["1"],
        "disc_rel_norm": 1, "ramified_rational_primes": [5],
    }
    return make_dump("small-iso", field_F, field_L, places, K, T, combos, s_kernel)


def fixture_zero_not_one():
    places = [
        {"label": "v1", "kind": "complex", "ramified_in_D": False, "embeddings": ["tau1", "tau2"]},
        {"label": "v2", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau3"]},
        {"label": "v3", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau4"]},
    ]
    K = [
        [4, -23, -31, 2, -31, -6, 19],
        [-4, 21, 30, -2, 30, 7, -20],
        [4, -22, -31, 2, -32, -7, 21],
        [4, -22, -32, 2, -31, -8, 20],
    ]
    T = [
        ["0", "-0.651", "0.550", "-0.453", "0.531", "-1.266", "1.114"],
        ["0", "-0.651", "1.266", "-0.453", "-1.634", "-0.550", "-2.218"],
        ["0", "0.737", "-0.568", "-1.120", "-0.191", "0.568", "-0.191"],
        ["0", "0.564", "-1.248", "2.026", "1.295", "1.248", "1.295"],
    ]
    T = [[fr(v) for v in row] for row in T]
    combos = [
        [1, 0, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 1, 0],
        [0, 0, 0, 0, -1, 0, 1],
        [0, -1, 0, -1, 1, 0, 1],
    ]
    s_kernel = [[1, 0, 0, 0, 0, 0, 0]]
    # eigenvalue-list target: the angular-zero generator of the solution line
    minus_targets = {(3, "tau1"): fr("2.74848703")}
    field_F = {
        "poly": [1, -2, -3, 0, 1], "label": "4.2.1328.1", "disc": -1328,
        "signature": [2, 1], "index_cofactor": 1,
    }
    field_L = {
        "description": "quadratic extension by a 4th root of unity",
        "rel_trace": ["0"], "rel_norm": ["1"],
        "disc_rel_norm": 1, "ramified_rational_primes": [2],
    }
    return make_dump("zero-not-one", field_F, field_L, places, K, T, combos,
                     s_kernel, minus_targets=minus_targets)


def fit_hnot0_targets():
    lams = [fr("1.741"), fr("2.123"), fr("8.735"), fr("9.883"), fr("23.107"), fr("25.020")]
    pattern = [(0, 1), (1, -1), (1, 1), (2, -1), (2, 1), (3, -1)]
    best = None
    for i in range(-60, 61):
        ts = fr("0.43035") + F(i, 10 ** 7)
        for j in range(-60, 61):
            t0 = fr("0.96028") + F(j, 10 ** 7)
            worst = F(0)
            for (n, s), lam in zip(pattern, lams):
                t = abs(s * ts + n * t0)
                dev = abs(1 + 4 * t * t - lam)
                worst = max(worst, dev)
            if best is None or worst < best[0]:
                best = (worst, ts, t0)
    worst, ts, t0 = best
    assert worst <= F(1, 1000), f"eigenvalue fit residual {float(worst)}"
    return ts, t0


def fixture_hnot0():
    places = [
        {"label": "v1", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau1"]},
        {"label": "v2", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau2"]},
        {"label": "v3", "kind": "complex", "ramified_in_D": False, "embeddings": ["tau3", "tau4"]},
    ]
    K = [
        [1, 3, -2, -2, -3, 0, 0],
        [1, 3, -2, -2, -4, 1, 0],
        [-19, -33, 26, 26, 43, -9, -6],
        [19, 33, -26, -26, -42, 10, 6],
    ]
    T = [
        ["0", "0", "0", "0.714", "-0.140", "-0.140", "0.953"],
        ["0", "0", "0", "-0.714", "0.140", "0.140", "0.239"],
        ["0", "0", "-0.480", "0", "-0.215", "0.215", "-0.356"],
        ["0", "0", "0.480", "0", "0.215", "-0.215", "-0.836"],
    ]
    T = [[fr(v) for v in row] for row in T]
    combos = [
        [1, 0, 0, 0, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0],
        [0, 0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, -1, 1, 0],
    ]
    s_kernel = [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0]]
    ts, t0 = fit_hnot0_targets()
    minus_targets = {(3, "tau3"): ts, (2, "tau3"): -t0 / 2}
    field_F = {
        "poly": [-3, -6, 7, -2, 1], "label": "4.2.10224.2", "disc": -10224,
        "signature": [2, 1], "index_cofactor": 4,
    }
    field_L = {
        "description": "quadratic extension by a 12th root of unity",
        "rel_trace": ["0"], "rel_norm": ["0"],
        "disc_rel_norm": 1, "ramified_rational_primes": [2, 3],
    }
    return make_dump("hnot0", field_F, field_L, places, K, T, combos,
                     s_kernel, minus_targets=minus_targets)


def fixture_zero_betti():
    places = [
        {"label": "v1", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau1"]},
        {"label": "v2", "kind": "complex", "ramified_in_D": False, "embeddings": ["tau2", "tau3"], "conjugate_pair": True},
        {"label": "v3", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau4"]},
        {"label": "v4", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau5"]},
        {"label": "v5", "kind": "real-ramified", "ramified_in_D": True, "embeddings": ["tau6"]},
    ]
    K = [
        [1, -1, -1, 1, -1, 2, -1, -1, 1, -2, 1],
        [-1, 0, 0, 0, 0, -1, 0, 1, -1, 2, -1],
        [-1, 0, 0, -2, 2, -2, 0, 1, 0, 1, -1],
        [1, 0, 0, 1, -1, 0, 1, -2, 2, -3, 2],
        [1, 1, 1, 1, -1, 1, 0, -1, 2, -3, 1],
        [-1, 0, 0, -1, 1, 0, 0, 0, 0, 1, 0],
    ]
    T = [
        ["0", "-0.610", "0.610", "0.242", "0.072", "-0.036", "0.157", "0.261", "-0.356", "-0.428", "0.261"],
        ["0", "1.032", "0.078", "0.299", "0.007", "-0.421", "-0.762", "0.282", "-0.154", "0.374", "1.0138"],
        ["0", "-0.078", "-1.032", "0.299", "0.007", "0.414", "1.068", "1.014", "0.381", "-0.160", "0.282"],
        ["0", "-0.395", "0.395", "-0.847", "-1.271", "0.635", "-1.059", "-0.304", "-0.722", "0.549", "-0.304"],
        ["0", "-0.292", "0.292", "-0.643", "0.259", "-0.130", "-0.192", "-0.721", "1.013", "0.754", "-0.721"],
        ["0", "0.344", "-0.344", "0.650", "0.926", "-0.463", "0.788", "-0.532", "-0.162", "-1.088", "-0.532"],
    ]
    T = [[fr(v) for v in row] for row in T]
    combos = [
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1],
        [0, 0, 0, 0, -1, 0, 0, 0, 1, -1, 0],
        [0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 0, -2, 0, 0, 0, 0],
    ]
    s_kernel = [[1] + [0] * 10]
    field_F = {
        "poly": [1, 4, 2, 0, -3, -1, 1], "label": "6.4.958527.1", "disc": -958527,
        "signature": [4, 1], "index_cofactor": 1,
    }
    field_L = {
        "description": "cyclotomic quadratic extension by a 6th root of unity",
        "rel_trace": ["1"], "rel_norm": ["1"],
        "disc_rel_norm": 1, "ramified_rational_primes": [3],
    }
    return make_dump("zero-betti", field_F, field_L, places, K, T, combos, s_kernel)


# ---------------------------------------------------------------------------
# scenarios and expected files


def write(path, data):
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print("wrote", path)


SHADY_ZNO = [-2, -1, 0, -1, 1, 0, 1]
PSI0_ZNO = [-9, -4, 0, -4, 4, 0, 4]
SHADY_HNOT0 = [-1, -1, 0, 0, -1, 1, 0]
PSI0_HNOT0 = [-1, -1, -2, 0, 0, 0, 0]

MINUS_TABLES = {
    "small-iso": {
        "combos": [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0],
                   [0, 0, 0, 1, 0, 0, 0], [0, 0, -1, 0, 1, -1, -2]],
        "k": [[2, -2, 4, -4], [-2, 2, -9, 9], [-3, 3, -10, 12], [4, -4, 6, -10]],
        "t": [["0", "0", "0", "0"], ["0", "0", "0", "0"],
              ["-0.898", "0.898", "0", "0"], ["-2.298", "2.298", "0", "0"]],
    },
    "zero-not-one": {
        "combos": [[1, 0, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 1, 0],
                   [0, 0, 0, 0, -1, 0, 1], [0, -1, 0, -1, 1, 0, 1]],
        "k": [[4, -4, 4, 4], [-37, 37, -38, -40], [50, -50, 53, 51], [9, -9, 9, 9]],
        "t": [["0", "0", "0", "0"], ["-0.716", "0.716", "0", "0"],
              ["0.584", "-0.584", "0", "0"], ["2.748", "-2.748", "0", "0"]],
    },
    "hnot0": {
        "combos": [[1, 0, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0, 0],
                   [0, 0, 1, 0, 0, 0, 0], [0, 0, 0, 0, -1, 1, 0]],
        "k": [[1, 1, -19, 19], [3, 3, -33, 33], [-2, -2, 26, -26], [3, 5, -52, 52]],
        "t": [["0", "0", "0", "0"], ["0", "0", "0", "0"],
              ["0", "0", "-0.480", "0.480"], ["0", "0", "0.430", "-0.430"]],
    },
    "zero-betti": {
        "combos": [[1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
                   [0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0],
                   [0, 0, 0, 0, 0, 0, 0, -1, 0, 0, 1],
                   [0, 0, 0, 0, -1, 0, 0, 0, 1, -1, 0],
                   [0, 0, 0, 0, 1, 2, 0, 0, 0, 0, 0],
                   [0, 0, 0, 1, 1, 0, -2, 0, 0, 0, 0]],
        "k": [[1, -1, -1, 1, 1, -1], [-2, 0, 0, 0, 2, 0], [2, -2, -2, 4, 2, 0],
              [4, -3, -3, 6, 6, -2], [3, -2, -2, -1, 1, 1], [2, 0, 0, -2, 0, 0]],
        "t": [["0", "0", "0", "0", "0", "0"], ["0", "1.110", "-1.110", "0", "0", "0"],
              ["0", "0.732", "-0.732", "0", "0", "0"], ["0", "-0.534", "0.534", "0", "0", "0"],
              ["0", "-0.835", "0.835", "0", "0", "0"], ["0", "1.830", "-1.830", "0", "0", "0"]],
    },
}

B_PRIMES = {
    "small-iso": [[2, 0, -1], [-1, 2, -1], [1, 2, 3]],
    "zero-not-one": [[1, -1, 1], [1, 2, 0], [1, 0, -2]],
    "hnot0": [[-1, -2, 1], [1, -2, 1], [0, 2, 5]],
    "zero-betti": [[1, 0, -2, 0, 0], [-1, 1, -1, 1, 1], [1, 0, 0, 0, 2],
                   [1, 2, 0, 0, 0], [-1, 0, 0, -2, 0]],
}

SSET_BLOCKS = {
    "small-iso": {
        "path": "numeric",
        "base_coeffs": [-4, 4, 1, -1, 1],
        "rel_trace": ["-1/2", "1/4", "-1/4", "-1/4"],
        "rel_norm": ["1"],
        "units": [
            [[0, 1], [0, 0], [0, 0], [0, 0]],
            [[-1, 0], [1, -1], [0, 0], [0, 0]],
            [[-1, 0], [1, 0], [0, 0], [0, 0]],
        ],
        "base_primes": [2, 5, 11],
    },
    "zero-betti": {
        "path": "numeric",
        "base_coeffs": [1, 4, 2, 0, -3, -1, 1],
        "rel_trace": ["1"],
        "rel_norm": ["1"],
        "units": [
            [[0, 1], [0, 0], [0, 0], [0, 0], [0, 0], [0, 0]],
            [[-2, 0], [1, 0], [0, 0], [0, 0], [0, 0], [0, 0]],
            [[-2, 0], [0, 0], [1, 0], [0, 0], [0, 0], [0, 0]],
            [[-2, 0], [-1, 0], [-1, 0], [1, 0], [0, 0], [0, 0]],
        ],
        "base_primes": [2, 3, 131, 271],
    },
}

VOLUMES = {
    "small-iso": 0.2510654,
    "zero-not-one": 0.2461808,
    "zero-betti": 3.397413,
    "hnot0": 5.902455,
    "lv": 2.834032,
}

ZETA_OVERRIDES = {
    "small-iso": {"2": [[1, 2], [1, 2]]},
    "hnot0": {"2": [[2, 2]]},
}

FIELD_INFO = {
    "small-iso": {"poly": [-4, 4, 1, -1, 1], "label": "4.2.1375.1", "disc": -1375,
                  "signature": [2, 1], "index_cofactor": 4},
    "zero-not-one": {"poly": [1, -2, -3, 0, 1], "label": "4.2.1328.1", "disc": -1328,
                     "signature": [2, 1], "index_cofactor": 1},
    "zero-betti": {"poly": [1, 4, 2, 0, -3, -1, 1], "label": "6.4.958527.1",
                   "disc": -958527, "signature": [4, 1], "index_cofactor": 1},
    "hnot0": {"poly": [-3, -6, 7, -2, 1], "label": "4.2.10224.2", "disc": -10224,
              "signature": [2, 1], "index_cofactor": 4},
    "lv": {"poly": [1, 0, -4, 4, -1, -2, 1], "label": "6.4.974528.1", "disc": -974528,
           "signature": [4, 1], "index_cofactor": 1},
}


def expected_checks(name):
    pub = "published"
    der = "derived"
    out = [{"check": "volume", "value": VOLUMES[name], "rtol": 1e-5, "source": pub}]
    if name == "lv":
        out.append({"check": "repequiv", "verdict": "representation-equivalent", "source": pub})
        out.append({"check": "verdict", "value": "representation-equivalent", "source": pub})
        return out
    mt = MINUS_TABLES[name]
    out.append({"check": "minus-rank", "value": len(mt["combos"]), "source": pub})
    out.append({"check": "minus-table", "combos": mt["combos"], "k": mt["k"],
                "t": mt["t"], "atol": 1e-3, "source": pub})
    out.append({"check": "k-lattice", "matrix": B_PRIMES[name], "source": pub})
    if name == "small-iso":
        out += [
            {"check": "classify", "kind": "omega-all", "exists": False, "source": pub},
            {"check": "classify", "kind": "omega-0", "exists": False, "source": der},
            {"check": "classify", "kind": "h-bullet", "exists": False, "source": der},
            {"check": "certificate-none", "degree": 1, "source": pub},
            {"check": "sset", "verdict": "finite", "source": pub},
            {"check": "verdict", "value": "isospectral-for-all-degrees", "source": pub},
        ]
    elif name == "zero-not-one":
        lam = [30.2167, 271.9505, 755.4182, 1480.6196, 2447.5549]
        out += [
            {"check": "classify", "kind": "omega-0", "exists": False, "source": pub},
            {"check": "classify", "kind": "omega-all", "exists": True, "source": pub},
            {"check": "solution-set", "kind": "omega-all", "reps": [SHADY_ZNO, [-x for x in SHADY_ZNO]],
             "kernel": [PSI0_ZNO], "source": pub},
            {"check": "eigenvalues", "kind": "omega-all", "values": lam, "atol": 1e-3, "source": pub},
            {"check": "certificate", "degree": 1, "lambda": 30.2167, "atol": 1e-3, "source": pub},
            {"check": "count", "kind": "omega-all", "upto": 300, "value": 4, "source": der},
            {"check": "growth", "kind": "omega-all", "points": [100, 1000, 10000, 100000],
             "exponent": 0.5, "tol": 0.15, "source": der},
            {"check": "verdict", "value": "zero-isospectral-but-not-one-isospectral", "source": pub},
        ]
    elif name == "zero-betti":
        out += [
            {"check": "classify", "kind": "omega-0", "exists": False, "source": pub},
            {"check": "classify", "kind": "h-bullet", "exists": True, "source": pub},
            {"check": "solution-set", "kind": "h-bullet",
             "reps": [[1] + [0] * 10, [-1] + [0] * 10], "kernel": [], "source": pub},
            {"check": "sset", "verdict": "infinite", "source": pub},
            {"check": "verdict", "value": "betti-numbers-differ", "source": pub},
        ]
    elif name == "hnot0":
        lam = [1.741, 2.123, 8.735, 9.883, 23.107, 25.020]
        out += [
            {"check": "classify", "kind": "h-bullet", "exists": False, "source": pub},
            {"check": "classify", "kind": "omega-0", "exists": True, "source": pub},
            {"check": "classify", "kind": "omega-all", "exists": True, "source": pub},
            {"check": "solution-set", "kind": "omega-all", "reps": [SHADY_HNOT0, [-x for x in SHADY_HNOT0]],
             "kernel": [PSI0_HNOT0], "source": pub},
            {"check": "eigenvalues", "kind": "omega-all", "values": lam, "atol": 1e-3, "source": pub},
            {"check": "certificate", "degree": 0, "lambda": 1.741, "atol": 1e-3, "source": pub},
            {"check": "certificate", "degree": 1, "lambda": 1.741, "atol": 1e-3, "source": pub},
            {"check": "count", "kind": "omega-all", "upto": 300, "value": 36, "source": der},
            {"check": "growth", "kind": "omega-all", "points": [100, 1000, 10000, 100000],
             "exponent": 0.5, "tol": 0.15, "source": der},
            {"check": "regulator-quotient", "value": "rational", "source": pub},
            {"check": "verdict", "value": "not-isospectral-regulator-quotient-rational", "source": pub},
        ]
    return out


def make_scenario(name):
    sc = {
        "schema": "scenario-1",
        "name": name,
        "field": FIELD_INFO[name],
        "delta_D_norm": 1,
        "level_norm": 1,
        "component_group_order": 2,
        "ciso_order": 2,
        "zeta_overrides": ZETA_OVERRIDES.get(name, {}),
        "expected": f"{name}.expected.json",
    }
    if name != "lv":
        sc["dump"] = f"{name}.hcg.json"
    if name in SSET_BLOCKS:
        sc["sset"] = SSET_BLOCKS[name]
    if name == "lv":
        sc["repequiv"] = {
            "delta_D_finite_norms": [],
            "d_real_ramification": ["v1", "v2", "v3", "v4"],
            "candidates": [{
                "name": "quadratic-extension-of-the-nontrivial-class",
                "real_ramification": ["v1", "v2"],
                "odd_level_primes_split": True,
                "ciso_class_primes_inert": True,
            }],
        }
    return sc


def main():
    os.makedirs(OUT, exist_ok=True)
    specs = {}

    data, dump = fixture_small_iso()
    specs["small-iso"] = (data, dump)
    data, dump = fixture_zero_not_one()
    specs["zero-not-one"] = (data, dump)
    data, dump = fixture_hnot0()
    specs["hnot0"] = (data, dump)
    data, dump = fixture_zero_betti()
    specs["zero-betti"] = (data, dump)

    for name, (data, dump) in specs.items():
        write(os.path.join(OUT, f"{name}.hcg.json"), data)

    for name in ["small-iso", "zero-not-one", "zero-betti", "hnot0", "lv"]:
        write(os.path.join(OUT, f"{name}.scenario.json"), make_scenario(name))
        write(os.path.join(OUT, f"{name}.expected.json"), expected_checks(name))

    # quick verdict self-checks before the full suite runs
    d = specs["small-iso"][1]
    assert not classify_shady(d, "omega-all").exists
    assert not classify_shady(d, "omega-0").exists
    assert not classify_shady(d, "h-bullet").exists

    d = specs["zero-not-one"][1]
    assert not classify_shady(d, "omega-0").exists
    rep = classify_shady(d, "omega-all")
    assert rep.exists and len(rep.reps) == 2 and len(rep.kernel) == 1
    shady = SHADY_ZNO
    assert {tuple(r) for r in rep.reps} == {tuple(shady), tuple(-x for x in shady)}
    cert = non_isospectral_certificate(d, {"delta_D_norm": 1, "level_norm": 1}, 1)
    assert cert is not None and abs(float(cert.lam) - 30.2167) < 1e-3
    assert count_shady_upto(d, "omega-all", {}, 300) == 4

    d = specs["hnot0"][1]
    assert not classify_shady(d, "h-bullet").exists
    assert classify_shady(d, "omega-0").exists
    rep = classify_shady(d, "omega-all")
    assert rep.exists
    assert {tuple(r) for r in rep.reps} == {tuple(SHADY_HNOT0), tuple(-x for x in SHADY_HNOT0)}
    c0 = non_isospectral_certificate(d, {"delta_D_norm": 1, "level_norm": 1}, 0)
    c1 = non_isospectral_certificate(d, {"delta_D_norm": 1, "level_norm": 1}, 1)
    assert c0 is not None and c1 is not None
    assert abs(float(c0.lam) - 1.741) < 1e-3
    print("hnot0 count300:", count_shady_upto(d, "omega-all", {}, 300))

    d = specs["zero-betti"][1]
    assert not classify_shady(d, "omega-0").exists
    rep = classify_shady(d, "h-bullet")
    assert rep.exists and not rep.kernel
    assert {tuple(r) for r in rep.reps} == {tuple([1] + [0] * 10), tuple([-1] + [0] * 10)}

    print("all fixture self-checks passed")


if __name__ == "__main__":
    main()
