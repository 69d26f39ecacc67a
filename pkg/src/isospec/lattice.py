"""Exact integer and rational linear algebra: HNF, LLL, box enumeration, square classes.

All matrices are lists of rows.  Lattices are generated by matrix *columns*.
No floating point anywhere in this module; rationals are `fractions.Fraction`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import sympy


class DimensionError(ValueError):
    pass


class RankError(ValueError):
    pass


# ---------------------------------------------------------------------------
# basic matrix helpers (rows of ints or Fractions)


def mat_shape(M):
    return (len(M), len(M[0]) if M else 0)


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, k = mat_shape(A)
    k2, m = mat_shape(B)
    if k != k2:
        raise DimensionError(f"cannot multiply {n}x{k} by {k2}x{m}")
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def mat_vec(A, v):
    if not A:
        return []
    if len(A[0]) != len(v):
        raise DimensionError("matrix/vector size mismatch")
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def transpose(M):
    return [list(col) for col in zip(*M)] if M else []


def columns(M):
    return [list(col) for col in zip(*M)] if M else []


def from_columns(cols, nrows=None):
    if not cols:
        return [[] for _ in range(nrows or 0)]
    return [list(row) for row in zip(*cols)]


def mat_eq(A, B):
    return mat_shape(A) == mat_shape(B) and all(
        a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb)
    )


# ---------------------------------------------------------------------------
# Hermite normal form (column style)


def _row_hnf(A):
    """Row-style HNF of an integer matrix.

    Returns (H, U) with H = U*A, U unimodular, H in row echelon form with
    positive pivots and entries above each pivot reduced into [0, pivot).
    """
    H = [list(map(int, row)) for row in A]
    n = len(H)
    m = len(H[0]) if H else 0
    U = identity(n)
    pivot_row = 0
    for col in range(m):
        if pivot_row >= n:
            break
        # find a row with nonzero entry in this column
        nz = [i for i in range(pivot_row, n) if H[i][col] != 0]
        if not nz:
            continue
        # euclidean elimination below pivot_row
        while True:
            nz = [i for i in range(pivot_row, n) if H[i][col] != 0]
            if len(nz) == 1:
                break
            nz.sort(key=lambda i: abs(H[i][col]))
            i0 = nz[0]
            for i in nz[1:]:
                q = H[i][col] // H[i0][col]
                if q:
                    H[i] = [a - q * b for a, b in zip(H[i], H[i0])]
                    U[i] = [a - q * b for a, b in zip(U[i], U[i0])]
        i0 = nz[0]
        if i0 != pivot_row:
            H[pivot_row], H[i0] = H[i0], H[pivot_row]
            U[pivot_row], U[i0] = U[i0], U[pivot_row]
        if H[pivot_row][col] < 0:
            H[pivot_row] = [-a for a in H[pivot_row]]
            U[pivot_row] = [-a for a in U[pivot_row]]
        p = H[pivot_row][col]
        for i in range(pivot_row):
            q = H[i][col] // p
            if q:
                H[i] = [a - q * b for a, b in zip(H[i], H[pivot_row])]
                U[i] = [a - q * b for a, b in zip(U[i], U[pivot_row])]
        pivot_row += 1
    return H, U


def hnf(M):
    """Column-style Hermite normal form.

    Returns (H, U) with H = M*U, U unimodular.  Columns of H generate the
    same lattice as columns of M; zero columns are moved to the end.
    """
    nrows, ncols = mat_shape(M)
    Ht, Ut = _row_hnf(transpose(M))
    H = transpose(Ht)
    U = transpose(Ut)
    return H, U


def hnf_basis(M):
    """Nonzero HNF columns of M: the canonical basis of the column lattice."""
    H, _ = hnf(M)
    return [c for c in columns(H) if any(x != 0 for x in c)]


def lattices_equal(A, B):
    """Column lattices of A and B coincide (equality of HNF bases)."""
    if mat_shape(A)[0] != mat_shape(B)[0]:
        return False
    return hnf_basis(A) == hnf_basis(B)


def solve_integer(A, b):
    """One integer solution x of A x = b, or None if none exists."""
    H, U = hnf(A)
    cols = columns(H)
    n = len(b)
    x = [0] * len(cols)
    r = list(b)
    pivots = []
    for j, c in enumerate(cols):
        nz = [i for i in range(n) if c[i] != 0]
        if nz:
            pivots.append((min(nz), j))
    # H is in column echelon form; eliminate residual top-down
    for i, j in sorted(pivots):
        if r[i] % cols[j][i] != 0:
            return None
        q = r[i] // cols[j][i]
        x[j] = q
        r = [a - q * c for a, c in zip(r, cols[j])]
    if any(r):
        return None
    return mat_vec(U, x)


def kernel_basis(A):
    """Basis (list of integer vectors) of the full integer kernel of A.

    Computed from the column HNF transform: the kernel is spanned by the
    transform columns aligned with zero columns of the HNF, which yields the
    saturated lattice (primitive spanning vectors alone would not)."""
    H, U = hnf(A)
    ucols = columns(U)
    hcols = columns(H)
    out = [u for u, h in zip(ucols, hcols) if all(x == 0 for x in h)]
    if not out:
        return []
    return hnf_basis(from_columns(out))


def is_saturated(vectors, ambient_dim):
    """Do the given integer vectors generate a saturated sublattice of Z^n?"""
    if not vectors:
        return True
    M = sympy.Matrix(from_columns([list(v) for v in vectors], ambient_dim))
    elem = M.T.smith_normal_form() if hasattr(M.T, "smith_normal_form") else None
    from sympy.matrices.normalforms import smith_normal_form

    S = smith_normal_form(M)
    divisors = [S[i, i] for i in range(min(S.shape)) if S[i, i] != 0]
    return all(abs(d) == 1 for d in divisors)


# ---------------------------------------------------------------------------
# determinants


def det_rational(M) -> Fraction:
    """Exact determinant of a square rational matrix (fraction-free Bareiss)."""
    n, m = mat_shape(M)
    if n != m:
        raise DimensionError(f"determinant of non-square {n}x{m} matrix")
    if n == 0:
        return Fraction(1)
    rows = [[Fraction(x) for x in row] for row in M]
    scale = Fraction(1)
    A = []
    for row in rows:
        den = math.lcm(*[x.denominator for x in row])
        scale *= den
        A.append([int(x * den) for x in row])
    # Bareiss on the integer matrix
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = A[k][k]
    return Fraction(sign * A[n - 1][n - 1], 1) / scale


def det_int(M) -> int:
    d = det_rational(M)
    assert d.denominator == 1
    return d.numerator


# ---------------------------------------------------------------------------
# LLL (exact, on lattice columns)

DEFAULT_DELTA = Fraction(99, 100)


def _gso(basis):
    """Gram-Schmidt over Fractions.  basis: list of vectors (columns)."""
    ortho = []
    mu = []
    for i, v in enumerate(basis):
        vi = [Fraction(x) for x in v]
        mu_i = []
        for j in range(i):
            bj = ortho[j]
            denom = sum(x * x for x in bj)
            m = sum(a * b for a, b in zip(vi, bj)) / denom
            mu_i.append(m)
            vi = [a - m * b for a, b in zip(vi, bj)]
        ortho.append(vi)
        mu.append(mu_i)
    return ortho, mu


def lll_reduce(M, delta: Fraction = DEFAULT_DELTA):
    """LLL-reduce the columns of an integer matrix; same lattice, new basis."""
    if not (Fraction(1, 4) < Fraction(delta) < 1):
        raise ValueError("delta must satisfy 1/4 < delta < 1")
    basis = columns(M)
    k_cols = len(basis)
    if k_cols == 0:
        return [list(row) for row in M]
    det_gram = det_rational(mat_mul(transpose(M), M))
    if det_gram == 0:
        raise RankError("basis columns are linearly dependent")
    delta = Fraction(delta)
    basis = [list(map(int, v)) for v in basis]

    def dot(u, v):
        return sum(Fraction(a) * b for a, b in zip(u, v))

    ortho, mu = _gso(basis)
    k = 1
    while k < k_cols:
        for j in reversed(range(k)):
            m = mu[k][j]
            if abs(m) > Fraction(1, 2):
                r = int(round(m))
                basis[k] = [a - r * b for a, b in zip(basis[k], basis[j])]
                ortho, mu = _gso(basis)
        norm_k = sum(x * x for x in ortho[k])
        norm_k1 = sum(x * x for x in ortho[k - 1])
        if norm_k >= (delta - mu[k][k - 1] ** 2) * norm_k1:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            ortho, mu = _gso(basis)
            k = max(k - 1, 1)
    return from_columns(basis, nrows=len(M))


# ---------------------------------------------------------------------------
# integer lattices and box enumeration


class IntLattice:
    """Sublattice of Z^n generated by the columns of an integer matrix."""

    def __init__(self, ambient_dim: int, basis_columns: Sequence[Sequence[int]]):
        self.ambient_dim = ambient_dim
        cols = [list(map(int, c)) for c in basis_columns]
        for c in cols:
            if len(c) != ambient_dim:
                raise DimensionError("basis column length != ambient dimension")
        M = from_columns(cols, nrows=ambient_dim)
        self._hnf_cols = hnf_basis(M) if cols else []
        self.rank = len(self._hnf_cols)
        if cols and self.rank != len(cols):
            raise RankError("basis columns are linearly dependent")
        self.basis = cols

    @classmethod
    def from_matrix(cls, M):
        return cls(mat_shape(M)[0], columns(M))

    @classmethod
    def span(cls, ambient_dim, vectors):
        """Lattice generated by possibly dependent vectors."""
        M = from_columns([list(v) for v in vectors], nrows=ambient_dim)
        return cls(ambient_dim, hnf_basis(M))

    def matrix(self):
        return from_columns(self.basis, nrows=self.ambient_dim)

    def hnf_matrix(self):
        return from_columns(self._hnf_cols, nrows=self.ambient_dim)

    def __eq__(self, other):
        if not isinstance(other, IntLattice):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self._hnf_cols == other._hnf_cols
        )

    def __hash__(self):
        return hash((self.ambient_dim, tuple(tuple(c) for c in self._hnf_cols)))

    def __repr__(self):
        return f"IntLattice(dim={self.ambient_dim}, rank={self.rank})"

    def contains(self, v):
        return solve_integer(self.matrix(), list(v)) is not None


def _frac_sqrt_floor(x: Fraction) -> int:
    """floor(sqrt(x)) for x >= 0 rational."""
    if x < 0:
        raise ValueError("negative radicand")
    num, den = x.numerator, x.denominator
    lo = math.isqrt(num // den)
    while (lo + 1) * (lo + 1) * den <= num:
        lo += 1
    while lo * lo * den > num:
        lo -= 1
    return lo


def box_points(lat: IntLattice, shift, boxes):
    """All v in shift + lat with v[i] in boxes[i] for every coordinate i.

    Exhaustive enumeration with LLL preconditioning and Gram-Schmidt pruning;
    exact arithmetic throughout.
    """
    n = lat.ambient_dim
    if len(boxes) != n or len(shift) != n:
        raise DimensionError("boxes/shift must have one entry per coordinate")
    boxes = [sorted(set(int(x) for x in b)) for b in boxes]
    for b in boxes:
        if not b:
            raise ValueError("empty box")
    shift = [int(x) for x in shift]
    if lat.rank == 0:
        v = tuple(shift)
        return [v] if all(v[i] in boxes[i] for i in range(n)) else []

    B = lll_reduce(lat.matrix())
    cols = columns(B)
    k = len(cols)
    ortho, mu = _gso(cols)
    norms = [sum(x * x for x in o) for o in ortho]

    # bounding ball of the box, centred rationally
    center = [Fraction(b[0] + b[-1], 2) for b in boxes]
    radius2 = sum((Fraction(b[-1] - b[0], 2)) ** 2 for b in boxes)
    target = [c - s for c, s in zip(center, shift)]
    # coordinates of target in the GSO frame
    tcoord = [
        sum(Fraction(a) * b for a, b in zip(target, ortho[j])) / norms[j]
        for j in range(k)
    ]

    results = []
    coeff = [0] * k

    def recurse(j, residual2, proj):
        # proj[i] = sum_{l>j} coeff[l] * mu[l][i] for i <= j
        if j < 0:
            v = list(shift)
            for l in range(k):
                if coeff[l]:
                    v = [a + coeff[l] * b for a, b in zip(v, cols[l])]
            if all(v[i] in boxes[i] for i in range(n)):
                results.append(tuple(v))
            return
        c = tcoord[j] - proj[j]
        bound2 = residual2 / norms[j]
        r = _frac_sqrt_floor(bound2)
        lo = math.ceil(c - r - 1)
        hi = math.floor(c + r + 1)
        for x in range(lo, hi + 1):
            d = Fraction(x) - c
            used = d * d * norms[j]
            if used > residual2:
                continue
            coeff[j] = x
            new_proj = [proj[i] + x * mu[j][i] for i in range(j)]
            recurse(j - 1, residual2 - used, new_proj)
        coeff[j] = 0

    recurse(k - 1, radius2, [Fraction(0)] * k)
    return sorted(results)


# ---------------------------------------------------------------------------
# square classes


def _squarefree_part(n: int) -> int:
    if n == 0:
        raise ValueError("zero has no square class")
    sign = -1 if n < 0 else 1
    out = sign
    for p, e in sympy.factorint(abs(n)).items():
        if e % 2:
            out *= p
    return out


class SquareClass:
    """An element of Q^x/(R^x)^2 for R in {Z, Q, Zp}.

    ring is "Q", "Z", or ("Zp", p).  Representatives:
      Q : squarefree integer (sign significant);
      Z : the rational itself ((Z^x)^2 = {1}, so classes are literal values);
      Zp: (valuation, unit class) with the unit class a quadratic-residue bit
          for odd p and the unit part mod 8 for p = 2.
    """

    __slots__ = ("ring", "rep")

    def __init__(self, ring, rep):
        self.ring = ring
        self.rep = rep

    def __eq__(self, other):
        if not isinstance(other, SquareClass):
            return NotImplemented
        return self.ring == other.ring and self.rep == other.rep

    def __hash__(self):
        return hash((self.ring if isinstance(self.ring, str) else tuple(self.ring), self.rep))

    def __mul__(self, other):
        if self.ring != other.ring:
            raise ValueError("cannot multiply classes over different rings")
        if self.ring == "Q":
            return square_class(Fraction(self.rep) * Fraction(other.rep), "Q")
        if self.ring == "Z":
            return square_class(Fraction(self.rep) * Fraction(other.rep), "Z")
        p = self.ring[1]
        v = self.rep[0] + other.rep[0]
        if p == 2:
            return SquareClass(self.ring, (v, (self.rep[1] * other.rep[1]) % 8))
        return SquareClass(self.ring, (v, self.rep[1] * other.rep[1]))

    def is_trivial(self):
        if self.ring == "Q":
            return self.rep == 1
        if self.ring == "Z":
            return Fraction(self.rep) == 1
        p = self.ring[1]
        if p == 2:
            return self.rep == (0, 1)
        return self.rep == (0, 1)

    def __repr__(self):
        return f"SquareClass({self.ring}, {self.rep})"


def square_class(x, ring="Q") -> SquareClass:
    """Canonical square class of a nonzero rational over Z, Q, or Z_p."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    if ring == "Q":
        return SquareClass("Q", _squarefree_part(x.numerator * x.denominator))
    if ring == "Z":
        return SquareClass("Z", x)
    if isinstance(ring, tuple) and ring[0] == "Zp":
        p = ring[1]
        v = 0
        num, den = x.numerator, x.denominator
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        if p == 2:
            # unit part mod 8; denominator inverse mod 8 equals itself (odd^2=1 mod 8)
            u = (num * den) % 8
            return SquareClass(ring, (v, u))
        u = (num * pow(den, -1, p)) % p
        legendre = pow(u, (p - 1) // 2, p)
        return SquareClass(ring, (v, 1 if legendre == 1 else -1))
    raise ValueError(f"unknown ring tag {ring!r}")
