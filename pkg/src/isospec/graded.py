"""Modules graded by a finite abelian group under a commutative graded algebra
with involution: linkage between homogeneous components, polarisations, graded
regulator constants, isotypic and p-local factorizations.

The algebra is presented only through its action: a list of generators, each
an exact rational matrix supported on the blocks dictated by its degree.
Abstract quotients are never materialized.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import sympy

from .lattice import (
    SquareClass,
    det_rational,
    from_columns,
    identity,
    mat_mul,
    mat_shape,
    square_class,
    transpose,
)


class SpecError(ValueError):
    pass


class NotPolarisableError(ValueError):
    pass


class NotLinkedError(ValueError):
    pass


class UnsupportedInputError(ValueError):
    pass


class FiniteAbelianGroup:
    """Abelian group given by invariant factors d1 | d2 | ...; elements are tuples."""

    def __init__(self, invariant_factors):
        self.factors = tuple(int(d) for d in invariant_factors)
        if any(d < 1 for d in self.factors):
            raise SpecError("invariant factors must be positive")
        self.elements = [
            tuple(t) for t in itertools.product(*[range(d) for d in self.factors])
        ] or [()]
        self.index = {e: i for i, e in enumerate(self.elements)}
        self.identity = tuple(0 for _ in self.factors)

    @property
    def order(self):
        return len(self.elements)

    def mul(self, a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, self.factors))

    def inv(self, a):
        return tuple((-x) % d for x, d in zip(a, self.factors))

    def element_order(self, a):
        e, n = a, 1
        while e != self.identity:
            e = self.mul(e, a)
            n += 1
        return n

    def characters(self):
        """Dual group as tuples; pairing(chi, c) lands in Z/lcm."""
        return list(self.elements)

    def pairing_nontrivial(self, chi, c):
        """chi(c) != 1, via the canonical pairing into Z/lcm."""
        if not self.factors:
            return False
        import math

        L = math.lcm(*self.factors)
        tot = sum((L // d) * x * y for x, y, d in zip(chi, c, self.factors)) % L
        return tot != 0


class Generator:
    __slots__ = ("name", "degree", "matrix", "iota_partner")

    def __init__(self, name, degree, matrix, iota_partner):
        self.name = name
        self.degree = tuple(degree)
        self.matrix = [[Fraction(x) for x in row] for row in matrix]
        self.iota_partner = iota_partner


class GradedModuleSpec:
    """Grading group, homogeneous dimensions, generator action, involution."""

    def __init__(self, group: FiniteAbelianGroup, dims, generators, seed=0):
        self.C = group
        self.dims = {tuple(c): int(dims[c]) for c in dims}
        for c in group.elements:
            self.dims.setdefault(c, 0)
        self.offsets = {}
        off = 0
        for c in group.elements:
            self.offsets[c] = off
            off += self.dims[c]
        self.dim = off
        self.generators = []
        for i, g in enumerate(generators):
            if isinstance(g, Generator):
                self.generators.append(g)
            else:
                self.generators.append(
                    Generator(
                        g.get("name", f"g{i}"),
                        tuple(g["degree"]),
                        g["matrix"],
                        g["iota_partner"],
                    )
                )
        self.seed = seed
        self._validate()

    # -- block bookkeeping ---------------------------------------------------

    def block(self, M, c_to, c_from):
        o1, n1 = self.offsets[c_to], self.dims[c_to]
        o2, n2 = self.offsets[c_from], self.dims[c_from]
        return [row[o2 : o2 + n2] for row in M[o1 : o1 + n1]]

    def _validate(self):
        for g in self.generators:
            if mat_shape(g.matrix) != (self.dim, self.dim):
                raise SpecError(f"generator {g.name} has wrong shape")
            if g.degree not in self.C.index:
                raise SpecError(f"generator {g.name} has unknown degree")
            for b in self.C.elements:
                target = self.C.mul(g.degree, b)
                for c in self.C.elements:
                    if c == target:
                        continue
                    blk = self.block(g.matrix, c, b)
                    if any(x != 0 for row in blk for x in row):
                        raise SpecError(
                            f"generator {g.name} not supported on its degree blocks"
                        )
        # iota is an involution on the generator set, inverting degrees
        for i, g in enumerate(self.generators):
            j = g.iota_partner
            if not (0 <= j < len(self.generators)):
                raise SpecError("iota partner out of range")
            if self.generators[j].iota_partner != i:
                raise SpecError("iota is not an involution on generators")
            if self.generators[j].degree != self.C.inv(g.degree):
                raise SpecError("iota partner has wrong degree")
        # degree-1 generators commute with everything
        for g in self.generators:
            if g.degree == self.C.identity:
                for h in self.generators:
                    if mat_mul(g.matrix, h.matrix) != mat_mul(h.matrix, g.matrix):
                        raise SpecError(
                            f"degree-1 generator {g.name} does not commute with {h.name}"
                        )

    def iota_matrix_of_expr(self, expr):
        """Apply the involution to a polynomial in the generators and evaluate it."""
        out = _zero(self.dim)
        for mono, coef in expr.items():
            M = identity(self.dim)
            for idx in reversed(mono):
                M = mat_mul(M, self.generators[self.generators[idx].iota_partner].matrix)
            out = _add(out, _scale(M, coef))
        return out

    def eval_expr(self, expr):
        out = _zero(self.dim)
        for mono, coef in expr.items():
            M = identity(self.dim)
            for idx in mono:
                M = mat_mul(M, self.generators[idx].matrix)
            out = _add(out, _scale(M, coef))
        return out


def _matrix_minpoly(Ms, x):
    """Minimal polynomial of a sympy matrix (monic, over Q)."""
    cp = Ms.charpoly(x).as_expr()
    fac = sympy.factor_list(cp, x)[1]
    exps = [mult for _, mult in fac]

    def annihilates(es):
        poly = sympy.Poly(
            sympy.prod([f.as_expr() ** e for (f, _), e in zip(fac, es)]), x
        )
        n = Ms.rows
        acc = sympy.eye(n) * poly.all_coeffs()[0]
        for co in poly.all_coeffs()[1:]:
            acc = acc * Ms + sympy.eye(n) * co
        return acc.is_zero_matrix

    for i in range(len(fac)):
        while exps[i] > 1:
            trial = list(exps)
            trial[i] -= 1
            if annihilates(trial):
                exps[i] -= 1
            else:
                break
        if exps[i] == 1:
            trial = list(exps)
            trial[i] = 0
            if annihilates(trial):
                exps[i] = 0
    out = sympy.prod([f.as_expr() ** e for (f, _), e in zip(fac, exps)])
    return sympy.Poly(out, x).as_expr()


def _zero(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def _scale(A, c):
    c = Fraction(c)
    return [[c * x for x in row] for row in A]


class AlgebraElement:
    __slots__ = ("degree", "matrix", "expr")

    def __init__(self, degree, matrix, expr):
        self.degree = degree
        self.matrix = matrix
        self.expr = dict(expr)


class _Span:
    """Incremental row-echelon span of vectorized matrices over Q."""

    def __init__(self):
        self.rows = []  # list of (pivot_index, vector)
        self.members = []

    def add(self, vec, payload):
        v = list(vec)
        for piv, r in self.rows:
            if v[piv] != 0:
                c = v[piv] / r[piv]
                v = [a - c * b for a, b in zip(v, r)]
        piv = next((i for i, x in enumerate(v) if x != 0), None)
        if piv is None:
            return False
        self.rows.append((piv, v))
        self.members.append(payload)
        return True

    def __len__(self):
        return len(self.rows)


def _vec(M):
    return [x for row in M for x in row]


class GradedAlgebra:
    """Span of the unital algebra generated by the spec's generators, graded."""

    def __init__(self, spec: GradedModuleSpec, max_len=None):
        self.spec = spec
        C = spec.C
        self.spans = {c: _Span() for c in C.elements}
        one = AlgebraElement(C.identity, identity(spec.dim), {(): Fraction(1)})
        self.spans[C.identity].add(_vec(one.matrix), one)
        frontier = [one]
        max_len = max_len if max_len is not None else spec.dim * spec.dim + 1
        length = 0
        while frontier and length < max_len:
            new_frontier = []
            for el in frontier:
                for gi, g in enumerate(spec.generators):
                    deg = C.mul(g.degree, el.degree)
                    mat = mat_mul(g.matrix, el.matrix)
                    mono = tuple(list(next(iter(el.expr))) + [gi]) if el.expr else (gi,)
                    # product monomial: generator applied after el
                    prod_expr = {}
                    for m, coef in el.expr.items():
                        prod_expr[(gi,) + m] = coef
                    cand = AlgebraElement(deg, mat, prod_expr)
                    if self.spans[deg].add(_vec(mat), cand):
                        new_frontier.append(cand)
            frontier = new_frontier
            length += 1

    def component(self, c):
        return self.spans[c].members


def _primary_decomposition(spec: GradedModuleSpec, seed=0):
    """Simultaneous primary decomposition of M under the degree-1 subalgebra.

    Returns (theta_expr, theta_matrix, factors) where each factor is a dict
    with the irreducible minpoly factor, its multiplicity, and a rational
    column basis of the corresponding primary component of M.
    """
    deg1 = [g for g in spec.generators if g.degree == spec.C.identity]
    n = spec.dim
    x = sympy.Symbol("x")
    rng = random.Random(seed)
    alg = GradedAlgebra(spec)
    b_elems = alg.component(spec.C.identity)
    dim_b = len(b_elems)
    for attempt in range(40):
        coeffs = [rng.randint(-5, 5) for _ in b_elems]
        theta = _zero(n)
        expr = {}
        for c, el in zip(coeffs, b_elems):
            if c == 0:
                continue
            theta = _add(theta, _scale(el.matrix, c))
            for m, cf in el.expr.items():
                expr[m] = expr.get(m, Fraction(0)) + c * cf
        Ms = sympy.Matrix([[sympy.Rational(v) for v in row] for row in theta])
        mp = _matrix_minpoly(Ms, x)
        if sympy.degree(mp, x) == dim_b:
            fac = sympy.factor_list(mp, x)
            factors = []
            for f, mult in fac[1]:
                fm = (f ** mult).expand()
                mat = sympy.zeros(n, n)
                Pm = sympy.Poly(fm, x)
                # evaluate fm at theta
                acc = sympy.eye(n) * Pm.all_coeffs()[0]
                for co in Pm.all_coeffs()[1:]:
                    acc = acc * Ms + sympy.eye(n) * co
                null = acc.nullspace()
                basis = []
                for v in null:
                    den = sympy.lcm([sympy.fraction(t)[1] for t in v]) if len(v) else 1
                    basis.append([Fraction(sympy.nsimplify(t * den)) for t in v])
                factors.append({"poly": sympy.Poly(f, x), "mult": mult, "basis": basis})
            return expr, theta, factors
    raise UnsupportedInputError(
        "could not find a generating element of the degree-1 algebra"
    )


def degree_one_reduced(spec: GradedModuleSpec) -> bool:
    """Is the image of the degree-1 subalgebra reduced?  (Trace-form radical.)"""
    alg = GradedAlgebra(spec)
    basis = [el.matrix for el in alg.component(spec.C.identity)]
    k = len(basis)
    tr = [
        [sum(mat_mul(a, b)[i][i] for i in range(spec.dim)) for b in basis]
        for a in basis
    ]
    return det_rational(tr) != 0


# ---------------------------------------------------------------------------
# invertible homogeneous elements and linkage


class Obstruction:
    """Certificate that no element of the requested degree acts invertibly:
    a nonzero subspace (of a primary factor) annihilated by, or not reached
    by, every element of that degree."""

    def __init__(self, kind, factor_basis, witness_basis):
        self.kind = kind  # "kernel" or "coimage"
        self.factor_basis = factor_basis
        self.witness_basis = witness_basis

    def __repr__(self):
        return f"Obstruction({self.kind}, dim={len(self.witness_basis)})"


def _restrict_to_subspace(M, basis_cols):
    """Matrix of M on span(basis_cols), exact; basis columns independent."""
    B = sympy.Matrix(from_columns(basis_cols, nrows=len(basis_cols[0])))
    Ms = sympy.Matrix([[sympy.Rational(x) for x in row] for row in M])
    img = Ms * B
    sol = B.gauss_jordan_solve(img)[0]
    return [
        [Fraction(sympy.nsimplify(sol[i, j])) for j in range(sol.cols)]
        for i in range(sol.rows)
    ]


def _det_identically_zero(mats):
    """Is det identically zero on the span of the given square matrices?"""
    n = len(mats[0])
    syms = sympy.symbols(f"a0:{len(mats)}")
    S = sympy.zeros(n, n)
    for s, m in zip(syms, mats):
        S += s * sympy.Matrix([[sympy.Rational(x) for x in row] for row in m])
    return sympy.expand(S.det(method="berkowitz")) == 0


def component_invertible(spec: GradedModuleSpec, c, seed=None, monomial_bound=None):
    """An algebra element of degree c acting invertibly on all of M, or None
    together with an obstruction certificate.

    Returns (element, None) on success, (None, Obstruction) on failure.
    """
    c = tuple(c)
    seed = spec.seed if seed is None else seed
    C = spec.C
    if spec.dim == 0:
        one = AlgebraElement(C.identity, identity(0), {(): Fraction(1)})
        return one, None
    if monomial_bound is None:
        monomial_bound = max(2 * C.order, spec.dim * spec.dim + 1)
    alg = GradedAlgebra(spec, max_len=monomial_bound)
    cand = alg.component(c)
    if not cand:
        return None, Obstruction("kernel", None, columns(identity(spec.dim)))
    # cheap path: a single monomial/element already invertible
    for el in cand:
        if det_rational(el.matrix) != 0:
            return el, None
    # random combos in the degree-c span
    rng = random.Random(seed)
    for width in (3, 10, 100):
        for _ in range(20):
            coeffs = [rng.randint(-width, width) for _ in cand]
            M = _zero(spec.dim)
            expr = {}
            for co, el in zip(coeffs, cand):
                if co == 0:
                    continue
                M = _add(M, _scale(el.matrix, co))
                for m, cf in el.expr.items():
                    expr[m] = expr.get(m, Fraction(0)) + co * cf
            if det_rational(M) != 0:
                return AlgebraElement(c, M, expr), None
    # no invertible element: verify the obstruction on a primary factor
    _, _, factors = _primary_decomposition(spec, seed=seed)
    for f in factors:
        basis = f["basis"]
        if not basis:
            continue
        restricted = [_restrict_to_subspace(el.matrix, basis) for el in cand]
        if all(all(x == 0 for row in m for x in row) for m in restricted):
            return None, Obstruction("kernel", basis, basis)
        if _det_identically_zero(restricted):
            # common kernel or unreached cokernel inside the factor
            stacked = [row for m in restricted for row in m]
            null = sympy.Matrix([[sympy.Rational(x) for x in row] for row in stacked]).nullspace()
            if null:
                # express obstruction vectors in ambient coordinates
                amb = []
                for v in null:
                    den = sympy.lcm([sympy.fraction(t)[1] for t in v]) if len(v) else 1
                    coeffs2 = [Fraction(sympy.nsimplify(t * den)) for t in v]
                    amb.append(
                        [
                            sum(co * Fraction(bv[j]) for co, bv in zip(coeffs2, basis))
                            for j in range(len(basis[0]))
                        ]
                    )
                return None, Obstruction("kernel", basis, amb)
            # image of the whole degree-c component inside the factor
            img_rows = []
            for m in restricted:
                img_rows.extend(transpose(m))
            Ms = sympy.Matrix([[sympy.Rational(x) for x in row] for row in img_rows])
            rank = Ms.rank()
            if rank < len(basis):
                return None, Obstruction("coimage", basis, basis)
            raise UnsupportedInputError(
                "degree component is singular without a kernel/coimage certificate"
            )
    raise UnsupportedInputError("no invertible element found and no certificate")


def columns(M):
    return [list(col) for col in zip(*M)] if M else []


class LinkWitness:
    __slots__ = ("c_from", "c_to", "element", "block")

    def __init__(self, c_from, c_to, element, block):
        self.c_from = c_from
        self.c_to = c_to
        self.element = element
        self.block = block


def linked(spec: GradedModuleSpec, c, c_to, seed=None):
    """A homogeneous element whose block M_c -> M_{c'} is invertible, or None."""
    c, c_to = tuple(c), tuple(c_to)
    seed = spec.seed if seed is None else seed
    d = spec.C.mul(c_to, spec.C.inv(c))
    if spec.dims[c] != spec.dims[c_to]:
        return None
    if spec.dims[c] == 0:
        one = AlgebraElement(spec.C.identity, identity(spec.dim), {(): Fraction(1)})
        return LinkWitness(c, c_to, one, [])
    el, _ = component_invertible(spec, d, seed=seed)
    if el is not None:
        return LinkWitness(c, c_to, el, spec.block(el.matrix, c_to, c))
    alg = GradedAlgebra(spec)
    cand = alg.component(d)
    if not cand:
        return None
    for el in cand:
        blk = spec.block(el.matrix, c_to, c)
        if det_rational(blk) != 0:
            return LinkWitness(c, c_to, el, blk)
    rng = random.Random(seed)
    for width in (3, 10, 100):
        for _ in range(20):
            coeffs = [rng.randint(-width, width) for _ in cand]
            M = _zero(spec.dim)
            expr = {}
            for co, e2 in zip(coeffs, cand):
                if co == 0:
                    continue
                M = _add(M, _scale(e2.matrix, co))
                for m, cf in e2.expr.items():
                    expr[m] = expr.get(m, Fraction(0)) + co * cf
            blk = spec.block(M, c_to, c)
            if det_rational(blk) != 0:
                return LinkWitness(c, c_to, AlgebraElement(d, M, expr), blk)
    blocks = [spec.block(e2.matrix, c_to, c) for e2 in cand]
    if _det_identically_zero(blocks):
        return None
    raise UnsupportedInputError("linkage undecided by sampling")


# ---------------------------------------------------------------------------
# polarisations


def polarisation_space(spec: GradedModuleSpec):
    """Basis of block-diagonal Gram matrices G with rho(T)^t G = G rho(iota T)
    for every generator T.  Orthogonality of distinct components is built in."""
    n = spec.dim
    # unknowns: entries of the diagonal blocks
    slots = []
    for c in spec.C.elements:
        o, d = spec.offsets[c], spec.dims[c]
        for i in range(d):
            for j in range(d):
                slots.append((o + i, o + j))
    idx = {s: k for k, s in enumerate(slots)}
    rows = []
    for g in spec.generators:
        R = g.matrix
        S = spec.generators[g.iota_partner].matrix
        # (R^t G - G S)[a][b] = 0
        for a in range(n):
            for b in range(n):
                row = [Fraction(0)] * len(slots)
                nonzero = False
                for k in range(n):
                    if R[k][a] != 0 and (k, b) in idx:
                        row[idx[(k, b)]] += Fraction(R[k][a])
                        nonzero = True
                    if S[k][b] != 0 and (a, k) in idx:
                        row[idx[(a, k)]] -= Fraction(S[k][b])
                        nonzero = True
                if nonzero:
                    rows.append(row)
    if rows:
        null = sympy.Matrix([[sympy.Rational(x) for x in r] for r in rows]).nullspace()
    else:
        null = [sympy.Matrix([1 if i == k else 0 for i in range(len(slots))]) for k in range(len(slots))]
    out = []
    for v in null:
        G = _zero(n)
        for k, (i, j) in enumerate(slots):
            G[i][j] = Fraction(sympy.nsimplify(v[k]))
        out.append(G)
    return out


def polarisable(spec: GradedModuleSpec, seed=None):
    """Decide polarisability over Q; returns (True, Gram) or (False, None)."""
    if not degree_one_reduced(spec):
        raise UnsupportedInputError("degree-1 algebra is not reduced")
    seed = spec.seed if seed is None else seed
    basis = polarisation_space(spec)
    if not basis:
        return False, None
    rng = random.Random(seed)
    for width in (3, 10, 100):
        for _ in range(25):
            coeffs = [rng.randint(-width, width) for _ in basis]
            G = _zero(spec.dim)
            for co, B in zip(coeffs, basis):
                if co:
                    G = _add(G, _scale(B, co))
            if det_rational(G) != 0:
                return True, G
    if _det_identically_zero(basis):
        return False, None
    raise UnsupportedInputError("polarisability undecided by sampling")


# ---------------------------------------------------------------------------
# graded regulator constants


def regconst_graded(spec: GradedModuleSpec, c, c_to, ring="Q", witness=None, seed=None) -> SquareClass:
    """det(T: M_c -> M_c') / det(iota(T): M_c' -> M_c) as a square class."""
    c, c_to = tuple(c), tuple(c_to)
    ok, _ = polarisable(spec, seed=seed)
    if not ok:
        raise NotPolarisableError("module admits no polarisation over Q")
    if witness is None:
        witness = linked(spec, c, c_to, seed=seed)
    if witness is None:
        raise NotLinkedError(f"components {c} and {c_to} are not linked")
    if spec.dims[c] == 0:
        return square_class(1, ring)
    T = witness.element
    iota_T = spec.iota_matrix_of_expr(T.expr)
    blk_fwd = spec.block(T.matrix, c_to, c)
    blk_bwd = spec.block(iota_T, c, c_to)
    d1 = det_rational(blk_fwd)
    d2 = det_rational(blk_bwd)
    if d1 == 0 or d2 == 0:
        raise NotLinkedError("witness blocks are singular")
    return square_class(d1 / d2, ring)


def regconst_from_polarisation(spec: GradedModuleSpec, c, c_to, gram, ring="Q") -> SquareClass:
    """det(gram | M_c) / det(gram | M_c'), the pairing form of the constant."""
    c, c_to = tuple(c), tuple(c_to)
    g1 = spec.block(gram, c, c)
    g2 = spec.block(gram, c_to, c_to)
    d1 = det_rational(g1) if g1 else Fraction(1)
    d2 = det_rational(g2) if g2 else Fraction(1)
    if d1 == 0 or d2 == 0:
        raise NotPolarisableError("gram degenerate on a component")
    return square_class(d1 / d2, ring)


# ---------------------------------------------------------------------------
# isotypic decomposition over the degree-1 algebra


def _spec_restricted(spec: GradedModuleSpec, subspace_cols):
    """Sub-spec on an algebra-stable subspace spanned by the given columns,
    re-coordinatized per homogeneous component."""
    # split the basis by component support
    comp_basis = {c: [] for c in spec.C.elements}
    for v in subspace_cols:
        for c in spec.C.elements:
            o, d = spec.offsets[c], spec.dims[c]
            piece = v[o : o + d]
            if any(x != 0 for x in piece):
                comp_basis[c].append(v)
                break
    # basis vectors must be supported on a single component; re-project otherwise
    clean = {c: [] for c in spec.C.elements}
    for c in spec.C.elements:
        o, d = spec.offsets[c], spec.dims[c]
        seen = _Span()
        for v in subspace_cols:
            piece = v[o : o + d]
            if any(x != 0 for x in piece):
                proj = [Fraction(0)] * spec.dim
                for i in range(d):
                    proj[o + i] = Fraction(piece[i])
                if seen.add(piece, None):
                    clean[c].append(proj)
    new_dims = {c: len(clean[c]) for c in spec.C.elements}
    full_basis = []
    for c in spec.C.elements:
        full_basis.extend(clean[c])
    if not full_basis:
        return None
    B = sympy.Matrix(from_columns(full_basis, nrows=spec.dim))
    gens = []
    for g in spec.generators:
        Ms = sympy.Matrix([[sympy.Rational(x) for x in row] for row in g.matrix])
        sol = B.gauss_jordan_solve(Ms * B)[0]
        mat = [
            [Fraction(sympy.nsimplify(sol[i, j])) for j in range(sol.cols)]
            for i in range(sol.rows)
        ]
        gens.append(Generator(g.name, g.degree, mat, g.iota_partner))
    return GradedModuleSpec(spec.C, new_dims, gens, seed=spec.seed)


def decompose_isotypic(spec: GradedModuleSpec, seed=None):
    """Split M along the iota-stable factors of the degree-1 algebra.

    Returns a list of sub-specs; regulator constants multiply over the list.
    """
    if not degree_one_reduced(spec):
        raise UnsupportedInputError("degree-1 algebra is not reduced")
    seed = spec.seed if seed is None else seed
    theta_expr, theta, factors = _primary_decomposition(spec, seed=seed)
    if len(factors) <= 1:
        return [spec]
    iota_theta = spec.iota_matrix_of_expr(theta_expr)
    n = spec.dim
    x = sympy.Symbol("x")
    # pair factors through iota: factor_i maps to the factor whose minpoly
    # annihilates iota(theta) on iota(factor basis) -- detect via membership
    Ms = sympy.Matrix([[sympy.Rational(v) for v in row] for row in iota_theta])
    pair = {}
    for i, f in enumerate(factors):
        Pm = sympy.Poly((f["poly"].as_expr()) ** f["mult"], x)
        acc = sympy.eye(n) * Pm.all_coeffs()[0]
        for co in Pm.all_coeffs()[1:]:
            acc = acc * Ms + sympy.eye(n) * co
        # factor j is iota-paired with i when f_i(iota theta) kills basis_j
        for j, g in enumerate(factors):
            Bj = sympy.Matrix(from_columns(g["basis"], nrows=n))
            if (acc * Bj).is_zero_matrix:
                pair[j] = i
                break
    orbits = []
    used = set()
    for i in range(len(factors)):
        if i in used:
            continue
        j = pair.get(i, i)
        orbit = {i, j}
        used |= orbit
        orbits.append(sorted(orbit))
    out = []
    for orbit in orbits:
        basis = []
        for i in orbit:
            basis.extend(factors[i]["basis"])
        sub = _spec_restricted(spec, basis)
        if sub is not None:
            out.append(sub)
    return out


# ---------------------------------------------------------------------------
# p-local factorization


def _matrix_mod(M, mod):
    return [[int(x) % mod for x in row] for row in M]


def _matmul_mod(A, B, mod):
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) % mod for col in Bt] for row in A]


def localize_p(spec: GradedModuleSpec, c, c_to, p, ring_check=True, seed=None):
    """Factor the graded module p-adically along iota-orbits of maximal ideals
    of the degree-1 algebra; return [(description, SquareClass over Zp)].

    The product of the local classes equals the global class modulo unit
    squares; requires the degree-1 minimal polynomial separable mod p and an
    integral module.
    """
    seed = spec.seed if seed is None else seed
    for g in spec.generators:
        for row in g.matrix:
            for xx in row:
                if Fraction(xx).denominator != 1:
                    raise UnsupportedInputError("p-local factorization needs an integral module")
    theta_expr, theta, factors_q = _primary_decomposition(spec, seed=seed)
    x = sympy.Symbol("x")
    Ms = sympy.Matrix([[sympy.Rational(v) for v in row] for row in theta])
    minpoly = _matrix_minpoly(Ms, x)
    minpoly = sympy.Poly(minpoly, x)
    den = sympy.lcm([sympy.fraction(sympy.Rational(co))[1] for co in minpoly.all_coeffs()])
    # theta integral? rescale if needed
    if den != 1 or any(Fraction(v).denominator != 1 for row in theta for v in row):
        raise UnsupportedInputError("degree-1 generating element is not integral")
    fp = sympy.Poly(minpoly.as_expr(), x, modulus=p)
    if sympy.degree(sympy.gcd(fp, fp.diff(x)), x) > 0:
        raise UnsupportedInputError(
            f"degree-1 minimal polynomial is inseparable mod {p}"
        )
    fac = sympy.factor_list(minpoly.as_expr(), x, modulus=p)[1]
    witness = linked(spec, c, c_to, seed=seed)
    if witness is None:
        raise NotLinkedError(f"components {c} and {c_to} are not linked")
    # integralize the witness
    T = witness.element.matrix
    den = 1
    for row in T:
        for v in row:
            den = den * Fraction(v).denominator // __import__("math").gcd(den, Fraction(v).denominator)
    Tint = [[int(Fraction(v) * den) for v in row] for row in T]
    iota_T = spec.iota_matrix_of_expr(witness.element.expr)
    iota_Tint = [[int(Fraction(v) * den) for v in row] for row in iota_T]

    n = spec.dim
    results = []
    N = 24
    while True:
        mod = p ** N
        theta_m = _matrix_mod(theta, mod)
        # idempotents per irreducible factor mod p, Newton-lifted to mod p^N
        idems = []
        for f, mult in fac:
            # e0: CRT idempotent (F/f) * ((F/f)^-1 mod f), all arithmetic mod p
            f_poly = sympy.Poly(f, x, modulus=p)
            F_over_f = fp.quo(f_poly)
            if sympy.degree(f_poly, x) > 0 and len(fac) > 1:
                inv = sympy.invert(F_over_f, f_poly)
                e_poly = (inv * F_over_f).rem(fp)
            else:
                e_poly = sympy.Poly(1, x, modulus=p)
            coeffs = e_poly.all_coeffs()
            E = [[0] * n for _ in range(n)]
            for co in coeffs:
                E = _matmul_mod(E, theta_m, mod)
                cc = int(co) % mod
                for i in range(n):
                    E[i][i] = (E[i][i] + cc) % mod
            # Newton lift: e <- 3e^2 - 2e^3
            for _ in range(8):
                E2 = _matmul_mod(E, E, mod)
                E3 = _matmul_mod(E2, E, mod)
                E = [
                    [(3 * a - 2 * b) % mod for a, b in zip(r2, r3)]
                    for r2, r3 in zip(E2, E3)
                ]
            idems.append((sympy.Poly(f, x, modulus=p), E))
        # iota pairing of the mod-p factors
        iota_theta = spec.iota_matrix_of_expr(theta_expr)
        iota_theta_m = _matrix_mod(iota_theta, p)
        pairs = {}
        for i, (f, E) in enumerate(idems):
            # f(iota theta) * E_j == 0 mod p identifies the partner of i
            coeffs = [int(co) % p for co in sympy.Poly(f, x).all_coeffs()]
            A = [[0] * n for _ in range(n)]
            for co in coeffs:
                A = _matmul_mod(A, iota_theta_m, p)
                for k in range(n):
                    A[k][k] = (A[k][k] + co) % p
            for j, (_, Ej) in enumerate(idems):
                prod = _matmul_mod(A, _matrix_mod(Ej, p), p)
                if all(v % p == 0 for row in prod for v in row):
                    pairs[i] = j
                    break
        orbits = []
        used = set()
        for i in range(len(idems)):
            if i in used:
                continue
            o = sorted({i, pairs.get(i, i)})
            used |= set(o)
            orbits.append(o)
        try:
            results = []
            for orbit in orbits:
                E = [[0] * n for _ in range(n)]
                for i in orbit:
                    E = [[(a + b) % mod for a, b in zip(ra, rb)] for ra, rb in zip(E, idems[i][1])]
                cls = _local_block_class(spec, E, Tint, iota_Tint, c, c_to, p, N)
                desc = "*".join(str(idems[i][0].as_expr()) for i in orbit)
                results.append((desc, cls))
            return results
        except _NeedMorePrecision:
            N *= 2
            if N > 400:
                raise UnsupportedInputError("p-adic precision runaway")


class _NeedMorePrecision(Exception):
    pass


def _local_block_class(spec, E, Tint, iota_Tint, c, c_to, p, N):
    mod = p ** N
    o1, d1 = spec.offsets[c], spec.dims[c]
    o2, d2 = spec.offsets[c_to], spec.dims[c_to]
    # basis of E * (component c): pivot columns mod p
    def component_image_basis(off, d):
        cols = []
        for j in range(d):
            col = [E[i][off + j] % mod for i in range(spec.dim)]
            cols.append(col)
        # select a maximal unit-pivot subset mod p
        chosen = []
        work = [list(col) for col in cols]
        used_rows = set()
        for jc, col in enumerate(work):
            piv = next(
                (i for i in range(spec.dim) if i not in used_rows and col[i] % p != 0),
                None,
            )
            if piv is None:
                continue
            chosen.append((jc, piv))
            inv = pow(col[piv], -1, mod)
            for jo in range(len(work)):
                if jo == jc or work[jo][piv] % mod == 0:
                    continue
                f = (work[jo][piv] * inv) % mod
                work[jo] = [(a - f * b) % mod for a, b in zip(work[jo], col)]
            used_rows.add(piv)
        return [cols[jc] for jc, _ in chosen], [piv for _, piv in chosen]

    Bc, piv_c = component_image_basis(o1, d1)
    Bct, piv_ct = component_image_basis(o2, d2)
    if len(Bc) != len(Bct):
        raise UnsupportedInputError("local components of unequal rank")
    if not Bc:
        return SquareClass(("Zp", p), (0, 1))

    def coords(mat, basis, pivots, target_basis, target_pivots):
        # solve target_basis * X = mat * basis  (mod p^N) using unit pivots
        cols_out = []
        for bcol in basis:
            v = [sum(mat[i][k] * bcol[k] for k in range(spec.dim)) % mod for i in range(spec.dim)]
            xs = [0] * len(target_basis)
            vv = list(v)
            for idx, (tb, piv) in enumerate(zip(target_basis, target_pivots)):
                a = (vv[piv] * pow(tb[piv], -1, mod)) % mod
                xs[idx] = a
                vv = [(x - a * y) % mod for x, y in zip(vv, tb)]
            cols_out.append(xs)
        return [list(row) for row in zip(*cols_out)]

    Mf = coords(Tint, Bc, piv_c, Bct, piv_ct)
    Mb = coords(iota_Tint, Bct, piv_ct, Bc, piv_c)

    def padic_det(Mm):
        # exact determinant of the integer lift, then p-adic reading
        d = det_rational(Mm)
        assert d.denominator == 1
        return d.numerator

    def val_unit(dd):
        if dd % mod == 0:
            raise _NeedMorePrecision()
        v = 0
        while dd % p == 0:
            dd //= p
            v += 1
        return v, dd

    df = padic_det(Mf)
    db = padic_det(Mb)
    if df == 0 or db == 0:
        raise _NeedMorePrecision()
    vf, uf = val_unit(df % mod if df % mod else df)
    vb, ub = val_unit(db % mod if db % mod else db)
    # determinants only known mod p^N: demand headroom
    if vf > N - 4 or vb > N - 4:
        raise _NeedMorePrecision()
    v = vf - vb
    if p == 2:
        u = (uf * pow(ub, -1, 8)) % 8
        return SquareClass(("Zp", 2), (v, u))
    leg = pow((uf * pow(ub, -1, p)) % p, (p - 1) // 2, p)
    return SquareClass(("Zp", p), (v, 1 if leg == 1 else -1))
