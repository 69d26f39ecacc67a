"""Finite groups given by multiplication tables: double cosets, Hecke
operators on fixed spaces, Brauer relations, and regulator constants.

Elements are indices 0..order-1 with identity at 0.  Representations act by
exact rational matrices.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .lattice import (
    SquareClass,
    columns,
    det_rational,
    from_columns,
    hnf_basis,
    identity,
    mat_mul,
    mat_shape,
    square_class,
    transpose,
)


class GroupDataError(ValueError):
    pass


class FiniteGroup:
    def __init__(self, mul_table):
        self.mul = [list(map(int, row)) for row in mul_table]
        self.order = len(self.mul)
        for row in self.mul:
            if len(row) != self.order:
                raise GroupDataError("multiplication table is not square")
        if any(self.mul[0][j] != j or self.mul[j][0] != j for j in range(self.order)):
            raise GroupDataError("index 0 is not an identity")
        self.inv = [None] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.mul[a][b] == 0:
                    self.inv[a] = b
        if any(v is None for v in self.inv):
            raise GroupDataError("some element has no inverse")

    def check_associative(self):
        n = self.order
        for a in range(n):
            for b in range(n):
                ab = self.mul[a][b]
                for c in range(n):
                    if self.mul[ab][c] != self.mul[a][self.mul[b][c]]:
                        raise GroupDataError("multiplication table is not associative")

    def conj(self, g, h):
        """g h g^-1"""
        return self.mul[self.mul[g][h]][self.inv[g]]

    def subgroup_generated(self, gens):
        elems = {0}
        frontier = list(gens)
        while frontier:
            g = frontier.pop()
            if g in elems:
                continue
            elems.add(g)
            for h in list(elems):
                for x in (self.mul[g][h], self.mul[h][g], self.inv[g]):
                    if x not in elems:
                        frontier.append(x)
        return Subgroup(self, sorted(elems))

    def all_subgroups(self):
        """All subgroups, by closure of subsets of elements (small groups only)."""
        seen = set()
        out = []
        for g in range(self.order):
            for h in range(self.order):
                sg = self.subgroup_generated([g, h])
                key = tuple(sg.elements)
                if key not in seen:
                    seen.add(key)
                    out.append(sg)
        return sorted(out, key=lambda s: (len(s.elements), s.elements))


class Subgroup:
    def __init__(self, parent: FiniteGroup, elements):
        self.parent = parent
        self.elements = sorted(set(int(e) for e in elements))
        if 0 not in self.elements:
            raise GroupDataError("subgroup misses the identity")
        eset = set(self.elements)
        for a in self.elements:
            if parent.inv[a] not in eset:
                raise GroupDataError("subgroup not closed under inverse")
            for b in self.elements:
                if parent.mul[a][b] not in eset:
                    raise GroupDataError("subgroup not closed under multiplication")

    def __len__(self):
        return len(self.elements)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.elements == other.elements

    def __lt__(self, other):
        return self.elements < other.elements

    def __hash__(self):
        return hash(tuple(self.elements))

    def __repr__(self):
        return f"Subgroup({self.elements})"


# ---------------------------------------------------------------------------
# constructions of common groups


def cyclic_group(n):
    return FiniteGroup([[(i + j) % n for j in range(n)] for i in range(n)])


def direct_product(G: FiniteGroup, H: FiniteGroup):
    n, m = G.order, H.order
    idx = lambda a, b: a * m + b
    table = [[0] * (n * m) for _ in range(n * m)]
    for a1 in range(n):
        for b1 in range(m):
            for a2 in range(n):
                for b2 in range(m):
                    table[idx(a1, b1)][idx(a2, b2)] = idx(G.mul[a1][a2], H.mul[b1][b2])
    return FiniteGroup(table)


def group_from_permutations(perms):
    """Group generated by permutations (tuples); elements ordered with id first."""
    n = len(perms[0])
    ident = tuple(range(n))
    elems = {ident}
    frontier = [tuple(p) for p in perms]
    while frontier:
        p = frontier.pop()
        if p in elems:
            continue
        elems.add(p)
        for q in list(elems):
            for r in (tuple(p[q[i]] for i in range(n)), tuple(q[p[i]] for i in range(n))):
                if r not in elems:
                    frontier.append(r)
    ordered = [ident] + sorted(e for e in elems if e != ident)
    index = {e: i for i, e in enumerate(ordered)}
    table = [
        [index[tuple(a[b[i]] for i in range(n))] for b in ordered] for a in ordered
    ]
    return FiniteGroup(table)


def symmetric_group(n):
    perms = [tuple([1, 0] + list(range(2, n)))] if n >= 2 else [tuple(range(n))]
    if n >= 2:
        perms.append(tuple(list(range(1, n)) + [0]))
    return group_from_permutations(perms)


def dihedral_group(n):
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return group_from_permutations([rot, ref])


def quaternion_group():
    # Q8 inside S8 acting on itself by left translation
    elems = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
    mul = {
        ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def prod(a, b):
        sign = 1
        if a.startswith("-"):
            sign, a = -sign, a[1:]
        if b.startswith("-"):
            sign, b = -sign, b[1:]
        if a == "1":
            r = b
        elif b == "1":
            r = a
        elif a == b:
            r, sign = "1", -sign
        else:
            r = mul[(a, b)]
            if r.startswith("-"):
                sign, r = -sign, r[1:]
        return r if sign == 1 else "-" + r

    perms = []
    for g in ["i", "j"]:
        perm = tuple(elems.index(prod(g, e)) for e in elems)
        perms.append(perm)
    return group_from_permutations(perms)


def klein_four_group():
    return direct_product(cyclic_group(2), cyclic_group(2))


# ---------------------------------------------------------------------------
# representations


class RationalRep:
    """A rational representation: one exact matrix per group element."""

    def __init__(self, group: FiniteGroup, matrices):
        self.group = group
        self.matrices = [
            [[Fraction(x) for x in row] for row in m] for m in matrices
        ]
        self.degree = mat_shape(self.matrices[0])[0]
        if len(self.matrices) != group.order:
            raise GroupDataError("one matrix per group element required")

    def check_homomorphism(self):
        for a in range(self.group.order):
            for b in range(self.group.order):
                if mat_mul(self.matrices[a], self.matrices[b]) != self.matrices[self.group.mul[a][b]]:
                    raise GroupDataError("matrices do not define a homomorphism")

    def direct_sum(self, other):
        assert self.group is other.group
        d1, d2 = self.degree, other.degree
        mats = []
        for a, b in zip(self.matrices, other.matrices):
            m = [[Fraction(0)] * (d1 + d2) for _ in range(d1 + d2)]
            for i in range(d1):
                for j in range(d1):
                    m[i][j] = a[i][j]
            for i in range(d2):
                for j in range(d2):
                    m[d1 + i][d1 + j] = b[i][j]
            mats.append(m)
        return RationalRep(self.group, mats)

    def conjugate(self, P, Pinv=None):
        if Pinv is None:
            import sympy

            Pinv_s = sympy.Matrix(P).inv()
            Pinv = [[Fraction(Pinv_s[i, j]) for j in range(Pinv_s.cols)] for i in range(Pinv_s.rows)]
        return RationalRep(
            self.group, [mat_mul(mat_mul(P, m), Pinv) for m in self.matrices]
        )


def trivial_rep(G: FiniteGroup):
    return RationalRep(G, [[[1]] for _ in range(G.order)])


def regular_rep(G: FiniteGroup):
    mats = []
    for g in range(G.order):
        m = [[0] * G.order for _ in range(G.order)]
        for h in range(G.order):
            m[G.mul[g][h]][h] = 1
        mats.append(m)
    return RationalRep(G, mats)


def permutation_rep(G: FiniteGroup, H: Subgroup):
    """Action of G on the left cosets G/H."""
    cosets = left_cosets(G, H)
    rep_of = {}
    for i, c in enumerate(cosets):
        for x in c:
            rep_of[x] = i
    mats = []
    for g in range(G.order):
        m = [[0] * len(cosets) for _ in range(len(cosets))]
        for i, c in enumerate(cosets):
            m[rep_of[G.mul[g][c[0]]]][i] = 1
        mats.append(m)
    return RationalRep(G, mats)


def left_cosets(G: FiniteGroup, H: Subgroup):
    seen = set()
    out = []
    for g in range(G.order):
        coset = tuple(sorted(G.mul[g][h] for h in H.elements))
        if coset not in seen:
            seen.add(coset)
            out.append(coset)
    return out


# ---------------------------------------------------------------------------
# double cosets and Hecke operators


def double_cosets(G: FiniteGroup, H: Subgroup, Hp: Subgroup):
    """Irredundant representatives g of Hp\\G/H with, for each, the coset
    representatives u of Hp/(Hp inter gHg^-1)."""
    seen = [False] * G.order
    out = []
    for g in range(G.order):
        if seen[g]:
            continue
        members = set()
        for u in Hp.elements:
            ug = G.mul[u][g]
            for h in H.elements:
                members.add(G.mul[ug][h])
        for x in members:
            seen[x] = True
        gH = {G.conj(g, h) for h in H.elements}
        inter = sorted(set(Hp.elements) & gH)
        used = set()
        ureps = []
        for u in Hp.elements:
            c = tuple(sorted(G.mul[u][x] for x in inter))
            if c not in used:
                used.add(c)
                ureps.append(u)
        out.append((g, ureps))
    return out


def fixed_space_basis(rep: RationalRep, H: Subgroup):
    """Columns spanning V^H, HNF-normalized for determinism."""
    import sympy

    d = rep.degree
    rows = []
    for h in H.elements:
        m = rep.matrices[h]
        for i in range(d):
            rows.append([m[i][j] - (1 if i == j else 0) for j in range(d)])
    if not rows:
        return columns(identity(d))
    null = sympy.Matrix([[sympy.Rational(x) for x in row] for row in rows]).nullspace()
    cols = []
    for v in null:
        den = sympy.lcm([sympy.fraction(x)[1] for x in v]) if len(v) else 1
        cols.append([int(x * den) for x in v])
    if not cols:
        return []
    return hnf_basis(from_columns(cols, nrows=d))


def _solve_in_basis(basis_cols, vectors):
    """Express each vector in the span of basis_cols; returns coefficient matrix."""
    import sympy

    B = sympy.Matrix(from_columns(basis_cols, nrows=len(basis_cols[0])))
    out_cols = []
    for v in vectors:
        sol = B.solve(sympy.Matrix(v)) if B.cols == B.rows else B.gauss_jordan_solve(sympy.Matrix(v))[0]
        out_cols.append([Fraction(sympy.nsimplify(x)) for x in sol])
    return from_columns(out_cols, nrows=len(basis_cols))


def hecke_matrix(G, H, Hp, g, rep: RationalRep):
    """Matrix of the double-coset operator for HpgH mapping V^H -> V^Hp,
    v -> sum over u in Hp/(Hp inter gHg^-1) of u g v, in the HNF bases."""
    BH = fixed_space_basis(rep, H)
    BHp = fixed_space_basis(rep, Hp)
    if not BH or not BHp:
        return [[Fraction(0)] * len(BH) for _ in range(len(BHp))]
    gH = {G.conj(g, h) for h in H.elements}
    inter = sorted(set(Hp.elements) & gH)
    used = set()
    ureps = []
    for u in Hp.elements:
        c = tuple(sorted(G.mul[u][x] for x in inter))
        if c not in used:
            used.add(c)
            ureps.append(u)
    images = []
    for col in BH:
        img = [Fraction(0)] * rep.degree
        gv = mat_vec_frac(rep.matrices[g], col)
        for u in ureps:
            ugv = mat_vec_frac(rep.matrices[u], gv)
            img = [a + b for a, b in zip(img, ugv)]
        images.append(img)
    return _solve_in_basis(BHp, images)


def mat_vec_frac(M, v):
    return [sum(Fraction(a) * Fraction(b) for a, b in zip(row, v)) for row in M]


# ---------------------------------------------------------------------------
# Brauer relations


class GSetSum:
    """Disjoint union of coset spaces G/H_i."""

    def __init__(self, group: FiniteGroup, subgroups):
        self.group = group
        self.subgroups = list(subgroups)

    def total_points(self):
        return sum(self.group.order // len(H) for H in self.subgroups)

    def permutation_character(self):
        """Number of fixed points of each group element on the G-set."""
        chi = [0] * self.group.order
        for H in self.subgroups:
            cosets = left_cosets(self.group, H)
            for g in range(self.group.order):
                for c in cosets:
                    if self.group.mul[g][c[0]] in c:
                        chi[g] += 1
        return chi

    def permutation_rep(self):
        reps = [permutation_rep(self.group, H) for H in self.subgroups]
        out = reps[0]
        for r in reps[1:]:
            out = out.direct_sum(r)
        return out


def is_brauer_relation(G: FiniteGroup, S1: GSetSum, S2: GSetSum, seed=0, tries=32):
    """A G-equivariant rational isomorphism Q[S2] -> Q[S1] if one exists, else None.

    Equivariant maps form a linear space; invertibility is Zariski-open, so a
    random rational point works when the permutation modules are isomorphic.
    Permutation characters decide existence exactly.
    """
    if S1.permutation_character() != S2.permutation_character():
        return None
    rep1 = S1.permutation_rep()
    rep2 = S2.permutation_rep()
    d1, d2 = rep1.degree, rep2.degree
    if d1 != d2:
        return None
    import sympy

    rows = []
    # Phi rho2(g) = rho1(g) Phi, unknowns Phi[i][j]
    for g in range(1, G.order):
        A = rep2.matrices[g]
        B = rep1.matrices[g]
        for i in range(d1):
            for j in range(d2):
                row = [Fraction(0)] * (d1 * d2)
                for k in range(d2):
                    row[i * d2 + k] += Fraction(A[k][j])
                for k in range(d1):
                    row[k * d2 + j] -= Fraction(B[i][k])
                rows.append(row)
    null = sympy.Matrix([[sympy.Rational(x) for x in r] for r in rows]).nullspace()
    if not null:
        return None
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [rng.randint(-5, 5) for _ in null]
        flat = [
            sum(c * Fraction(v[idx]) for c, v in zip(coeffs, null))
            for idx in range(d1 * d2)
        ]
        Phi = [flat[i * d2 : (i + 1) * d2] for i in range(d1)]
        if det_rational(Phi) != 0:
            return Phi
    # characters matched, so a relation exists; widen the coefficient range
    for width in (20, 100, 1000):
        for _ in range(tries):
            coeffs = [rng.randint(-width, width) for _ in null]
            flat = [
                sum(c * Fraction(v[idx]) for c, v in zip(coeffs, null))
                for idx in range(d1 * d2)
            ]
            Phi = [flat[i * d2 : (i + 1) * d2] for i in range(d1)]
            if det_rational(Phi) != 0:
                return Phi
    raise RuntimeError("matching characters but no invertible point found")


# ---------------------------------------------------------------------------
# invariant pairings and regulator constants


class PairingError(ValueError):
    pass


def invariant_pairing(rep: RationalRep, seed=0):
    """A non-degenerate G-invariant symmetric pairing, by averaging a random
    positive matrix over the group."""
    rng = random.Random(seed)
    d = rep.degree
    while True:
        A = [[rng.randint(0, 3) for _ in range(d)] for _ in range(d)]
        M = [[Fraction(A[i][j] + A[j][i] + (4 * d if i == j else 0)) for j in range(d)] for i in range(d)]
        G_, avg = rep.group, [[Fraction(0)] * d for _ in range(d)]
        for g in range(G_.order):
            R = rep.matrices[g]
            RtMR = mat_mul(mat_mul(transpose(R), M), R)
            avg = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(avg, RtMR)]
        avg = [[x / G_.order for x in row] for row in avg]
        if det_rational(avg) != 0:
            return avg
        seed += 1
        rng = random.Random(seed)


def check_invariant_pairing(rep: RationalRep, P):
    d = rep.degree
    if mat_shape(P) != (d, d):
        raise PairingError("pairing has wrong shape")
    if det_rational(P) == 0:
        raise PairingError("pairing is degenerate")
    for g in range(rep.group.order):
        R = rep.matrices[g]
        if mat_mul(mat_mul(transpose(R), P), R) != [[Fraction(x) for x in row] for row in P]:
            raise PairingError("pairing is not G-invariant")


def _gram_on_subspace(P, basis_cols, scale: Fraction):
    G = [
        [
            scale * sum(Fraction(P[i][j]) * bi[i] * bj[j] for i in range(len(bi)) for j in range(len(bj)))
            for bj in basis_cols
        ]
        for bi in basis_cols
    ]
    return G


def regconst_brauer(G: FiniteGroup, S1: GSetSum, S2: GSetSum, rep: RationalRep,
                    pairing=None, seed=0, ring="Q") -> SquareClass:
    """Regulator constant of rep for the relation (S1, S2): the ratio of Gram
    determinants of the averaged pairings on the fixed spaces, as a square class."""
    if pairing is None:
        pairing = invariant_pairing(rep, seed=seed)
    else:
        check_invariant_pairing(rep, pairing)
    num = Fraction(1)
    for H in S1.subgroups:
        B = fixed_space_basis(rep, H)
        if B:
            g = _gram_on_subspace(pairing, B, Fraction(1, len(H)))
            d = det_rational(g)
            if d == 0:
                raise PairingError("pairing degenerate on a fixed space")
            num *= d
    den = Fraction(1)
    for H in S2.subgroups:
        B = fixed_space_basis(rep, H)
        if B:
            g = _gram_on_subspace(pairing, B, Fraction(1, len(H)))
            d = det_rational(g)
            if d == 0:
                raise PairingError("pairing degenerate on a fixed space")
            den *= d
    return square_class(num / den, ring)


def adjoint_pair_invariant(phi, phi_star, ring="Q") -> SquareClass:
    """det(phi)/det(phi_star) as a square class; both must be invertible over Q."""
    d1 = det_rational(phi)
    d2 = det_rational(phi_star)
    if d1 == 0 or d2 == 0:
        raise ValueError("maps must be invertible over Q")
    return square_class(d1 / d2, ring)
