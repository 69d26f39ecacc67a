"""Shared constructors for randomized regulator-constant sweeps."""

import random
from fractions import Fraction

from isospec.graded import FiniteAbelianGroup, GradedModuleSpec
from isospec.groups import (
    FiniteGroup,
    GSetSum,
    Subgroup,
    cyclic_group,
    dihedral_group,
    direct_product,
    klein_four_group,
    permutation_rep,
    quaternion_group,
    regular_rep,
    symmetric_group,
    trivial_rep,
)
from isospec.lattice import identity, mat_mul, transpose

C2 = FiniteAbelianGroup([2])


def swap_spec(a, n=1):
    Z = [[Fraction(0)] * n for _ in range(n)]
    I = identity(n)
    A = [[Fraction(a) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    top = [list(z) + list(r) for z, r in zip(Z, A)]
    bot = [list(r) + list(z) for r, z in zip(I, Z)]
    X = top + bot
    gen = {"name": "T", "degree": (1,), "matrix": X, "iota_partner": 0}
    return GradedModuleSpec(C2, {(0,): n, (1,): n}, [gen])


def quadratic_field_spec(d, a_coeffs):
    s = [[Fraction(0), Fraction(d)], [Fraction(1), Fraction(0)]]
    a0, a1 = a_coeffs
    rho_a = [[Fraction(a0), Fraction(a1 * d)], [Fraction(a1), Fraction(a0)]]
    Z = [[Fraction(0)] * 2 for _ in range(2)]
    I = identity(2)

    def blocked(b11, b12, b21, b22):
        top = [list(r1) + list(r2) for r1, r2 in zip(b11, b12)]
        bot = [list(r1) + list(r2) for r1, r2 in zip(b21, b22)]
        return top + bot

    X = blocked(Z, rho_a, I, Z)
    t = blocked(s, Z, Z, s)
    gens = [
        {"name": "X", "degree": (1,), "matrix": X, "iota_partner": 0},
        {"name": "t", "degree": (0,), "matrix": t, "iota_partner": 1},
    ]
    return GradedModuleSpec(C2, {(0,): 2, (1,): 2}, gens)


def conjugated_spec(spec, rng):
    """Grading-preserving change of basis: block-diagonal unimodular."""
    import sympy

    blocks = []
    for c in spec.C.elements:
        n = spec.dims[c]
        while True:
            P = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
            M = sympy.Matrix(P)
            if abs(M.det()) == 1:
                blocks.append(P)
                break
    full = [[Fraction(0)] * spec.dim for _ in range(spec.dim)]
    for c, P in zip(spec.C.elements, blocks):
        off = spec.offsets[c]
        for i in range(len(P)):
            for j in range(len(P)):
                full[off + i][off + j] = Fraction(P[i][j])
    import sympy as sp

    inv = sp.Matrix([[sp.Rational(x) for x in row] for row in full]).inv()
    full_inv = [[Fraction(inv[i, j]) for j in range(spec.dim)] for i in range(spec.dim)]
    gens = []
    for g in spec.generators:
        M = mat_mul(mat_mul(full_inv, g.matrix), full)
        gens.append({"name": g.name, "degree": g.degree, "matrix": M,
                     "iota_partner": g.iota_partner})
    return GradedModuleSpec(spec.C, dict(spec.dims), gens, seed=spec.seed)


def cyclic_link_spec(order, vals):
    """C_n-graded, one-dimensional components, one invertible degree-1
    generator and its transpose as the involute."""
    grp = FiniteAbelianGroup([order])
    M = [[Fraction(0)] * order for _ in range(order)]
    for b in range(order):
        M[(b + 1) % order][b] = Fraction(vals[b])
    Mt = transpose(M)
    gens = [
        {"name": "X", "degree": (1,), "matrix": M, "iota_partner": 1},
        {"name": "Xt", "degree": (order - 1,), "matrix": Mt, "iota_partner": 0},
    ]
    return GradedModuleSpec(grp, {(i,): 1 for i in range(order)}, gens)


GROUP_CATALOG = {
    "C2": lambda: cyclic_group(2),
    "C3": lambda: cyclic_group(3),
    "C4": lambda: cyclic_group(4),
    "V4": klein_four_group,
    "C6": lambda: cyclic_group(6),
    "S3": lambda: symmetric_group(3),
    "C8": lambda: cyclic_group(8),
    "D4": lambda: dihedral_group(4),
    "Q8": quaternion_group,
    "C2xC4": lambda: direct_product(cyclic_group(2), cyclic_group(4)),
    "C2xC2xC2": lambda: direct_product(cyclic_group(2), klein_four_group()),
    "D6": lambda: dihedral_group(6),
    "A4": lambda: symmetric_group(3) and _a4(),
}


def _a4():
    from isospec.groups import group_from_permutations

    return group_from_permutations([(1, 2, 0, 3), (1, 0, 3, 2)])


def find_brauer_relation(G):
    """A pair of distinct G-set sums with equal permutation characters, by a
    small multiset search over the subgroup lattice; None if cyclic."""
    import itertools

    subs = G.all_subgroups()
    sums = {}
    for size in (1, 2, 3):
        for multi in itertools.combinations_with_replacement(range(len(subs)), size):
            ss = GSetSum(G, [subs[i] for i in multi])
            chi = tuple(ss.permutation_character())
            if chi in sums:
                other = sums[chi]
                if sorted(other) != sorted(multi):
                    return (
                        GSetSum(G, [subs[i] for i in other]),
                        GSetSum(G, [subs[i] for i in multi]),
                    )
            else:
                sums[chi] = multi
    return None


def random_rep(G, rng, max_degree=16):
    subs = G.all_subgroups()
    reps = [trivial_rep(G)]
    total = 1
    for _ in range(3):
        H = rng.choice(subs)
        r = permutation_rep(G, H)
        if total + r.degree > max_degree:
            continue
        reps.append(r)
        total += r.degree
    out = reps[0]
    for r in reps[1:]:
        out = out.direct_sum(r)
    return out
