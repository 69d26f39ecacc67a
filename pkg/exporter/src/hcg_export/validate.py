"""Standalone validation of hcg-1 dumps.

Runs the same invariant battery as the consumer's loader without importing
it: schema shape, the Galois matrix being an involution compatible with the
angular and analytic tables, stability and vanishing of the s-kernel, and
the precision floor.
"""

from __future__ import annotations

from fractions import Fraction

SCHEMA = "hcg-1"
PLACE_KINDS = ("complex", "real-ramified", "real-split")
MIN_PRECISION = Fraction(1, 1000)


class ValidationError(ValueError):
    pass


def _mat_mul(A, B):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def _mat_vec(A, v):
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def _row_hnf(A):
    H = [list(map(int, row)) for row in A]
    n, m = len(H), len(H[0]) if H else 0
    pivot = 0
    for col in range(m):
        if pivot >= n:
            break
        while True:
            nz = [i for i in range(pivot, n) if H[i][col] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda i: abs(H[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = H[i][col] // H[i0][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[i0])]
        nz = [i for i in range(pivot, n) if H[i][col] != 0]
        if not nz:
            continue
        i0 = nz[0]
        H[pivot], H[i0] = H[i0], H[pivot]
        if H[pivot][col] < 0:
            H[pivot] = [-a for a in H[pivot]]
        p = H[pivot][col]
        for i in range(pivot):
            q = H[i][col] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[pivot])]
        pivot += 1
    return [row for row in H if any(row)]


def _lattice_key(columns_):
    if not columns_:
        return ()
    rows = [list(r) for r in zip(*columns_)]
    return tuple(tuple(r) for r in _row_hnf(rows))


def _sigma_row_action(places, labels):
    idx = {l: i for i, l in enumerate(labels)}
    perm = list(range(len(labels)))
    ksign = [1] * len(labels)
    for p in places:
        if p["kind"] == "real-ramified":
            ksign[idx[p["embeddings"][0]]] = -1
        else:
            a, b = idx[p["embeddings"][0]], idx[p["embeddings"][1]]
            perm[a], perm[b] = b, a
            if p.get("conjugate_pair"):
                ksign[a] = -1
                ksign[b] = -1
    return perm, ksign


def validate_dump(data) -> list:
    """All invariant violations found (empty list means the dump is valid)."""
    errors = []
    if data.get("schema") != SCHEMA:
        return [f"schema must be {SCHEMA!r}"]
    places = data.get("places", [])
    for p in places:
        if p.get("kind") not in PLACE_KINDS:
            errors.append(f"unknown place kind {p.get('kind')!r}")
        want = 1 if p.get("kind") == "real-ramified" else 2
        if len(p.get("embeddings", [])) != want:
            errors.append(f"place {p.get('label')}: wrong embedding count")
    labels = [e for p in places for e in p.get("embeddings", [])]
    if len(set(labels)) != len(labels):
        errors.append("duplicate embedding labels")
    r = int(data.get("rank", -1))
    basis = data.get("basis", [])
    if len(basis) != r:
        errors.append("basis size differs from rank")
    try:
        prec = Fraction(str(data.get("precision", "1")))
    except Exception:
        errors.append("unparsable precision")
        prec = Fraction(1)
    if prec > MIN_PRECISION:
        errors.append(f"precision {prec} coarser than the floor {MIN_PRECISION}")
    if errors:
        return errors
    sigma = data["sigma_matrix"]
    if len(sigma) != r or any(len(row) != r for row in sigma):
        return ["sigma matrix has wrong shape"]
    ident = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
    if _mat_mul(sigma, sigma) != ident:
        errors.append("sigma is not an involution")
    K = [[int(b["k"][lbl]) for b in basis] for lbl in labels]
    T = [[Fraction(str(b["t"][lbl]["value"])) for b in basis] for lbl in labels]
    TE = [[Fraction(str(b["t"][lbl]["err"])) for b in basis] for lbl in labels]
    perm, ksign = _sigma_row_action(places, labels)
    KS = _mat_mul(K, sigma)
    for i in range(len(labels)):
        for j in range(r):
            if KS[i][j] != ksign[i] * K[perm[i]][j]:
                errors.append(f"sigma action breaks the k table at {labels[i]}, basis {j}")
                break
    TS = _mat_mul(T, sigma)
    for i in range(len(labels)):
        for j in range(r):
            bound = sum(abs(sigma[l][j]) * TE[i][l] for l in range(r)) + TE[perm[i]][j]
            if abs(TS[i][j] - T[perm[i]][j]) > bound:
                errors.append(f"sigma action breaks the t table at {labels[i]}, basis {j}")
                break
    skr = data.get("s_kernel", [])
    if skr:
        cols = [[int(v) for v in col] for col in skr]
        scols = [_mat_vec(sigma, c) for c in cols]
        if _lattice_key(cols) != _lattice_key(scols):
            errors.append("s_kernel is not stable under sigma")
        for c in cols:
            for i in range(len(labels)):
                val = sum(Fraction(c[j]) * T[i][j] for j in range(r))
                err = sum(abs(Fraction(c[j])) * TE[i][j] for j in range(r))
                if abs(val) > err:
                    errors.append("s_kernel member has a nonvanishing analytic parameter")
                    break
    for b in basis:
        if "conductor_norm" not in b:
            errors.append(f"basis character {b.get('name')} lacks conductor data")
    return errors
