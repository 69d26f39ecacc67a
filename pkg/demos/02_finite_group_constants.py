"""Regulator constants of finite-group modules.

The Klein four-group carries the smallest interesting relation between
coset spaces; averaging any positive pairing over the group and comparing
Gram determinants on fixed spaces gives an invariant square class that does
not depend on the pairing.
"""

from isospec.groups import (
    GSetSum,
    Subgroup,
    is_brauer_relation,
    klein_four_group,
    regconst_brauer,
    regular_rep,
    trivial_rep,
)
from isospec.lattice import det_rational

G = klein_four_group()
one = Subgroup(G, [0])
whole = Subgroup(G, list(range(4)))
index2 = [s for s in G.all_subgroups() if len(s) == 2]

S1 = GSetSum(G, [one, whole, whole])
S2 = GSetSum(G, index2)
print("permutation characters:", S1.permutation_character(), S2.permutation_character())

witness = is_brauer_relation(G, S1, S2)
print("equivariant isomorphism found with determinant", det_rational(witness))

V = trivial_rep(G)
for seed in range(4):
    cls = regconst_brauer(G, S1, S2, V, seed=seed)
    print(f"trivial module, random pairing #{seed}: class {cls.rep}")

V = regular_rep(G)
for seed in range(2):
    cls = regconst_brauer(G, S1, S2, V, seed=seed)
    print(f"regular module, random pairing #{seed}: class {cls.rep}")

print()
print("The class 2 on the trivial module is the hand value")
print("(1 * 1/4 * 1/4) / (1/2)^3 = 1/2, squarefree representative 2.")
