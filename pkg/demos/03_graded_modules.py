"""Graded modules and their regulator constants.

A two-component module linked by a single operator squaring to a scalar is
the basic pattern behind equal spectral multiplicities: its constant is the
norm power of the square, and it factors through every p-adic localization.
"""

from fractions import Fraction

from isospec.graded import (
    FiniteAbelianGroup,
    GradedModuleSpec,
    decompose_isotypic,
    linked,
    localize_p,
    polarisable,
    regconst_graded,
)
from isospec.lattice import identity

C2 = FiniteAbelianGroup([2])


def swap_spec(a, n=1):
    Z = [[Fraction(0)] * n for _ in range(n)]
    I = identity(n)
    A = [[Fraction(a) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    X = [list(z) + list(r) for z, r in zip(Z, A)] + [list(r) + list(z) for r, z in zip(I, Z)]
    return GradedModuleSpec(C2, {(0,): n, (1,): n},
                            [{"name": "T", "degree": (1,), "matrix": X, "iota_partner": 0}])


for a, n in [(2, 1), (3, 2), (-5, 1)]:
    spec = swap_spec(a, n)
    ok, gram = polarisable(spec)
    w = linked(spec, (0,), (1,))
    cls = regconst_graded(spec, (0,), (1,))
    print(f"T^2 = {a}, component dimension {n}: polarisable={ok}, "
          f"constant class {cls.rep} (expected {a}^{n} mod squares)")

spec = swap_spec(2)
print()
print("p-adic factorizations of the T^2 = 2 module:")
for p in (2, 5, 7):
    for desc, cls in localize_p(spec, (1,), (0,), p):
        print(f"  p={p}: factor {desc}: valuation {cls.rep[0]}, unit class {cls.rep[1]}")

print()
print("A module whose degree-one algebra is a product splits into factors")
print("whose constants multiply:")
spec = swap_spec(6)
parts = decompose_isotypic(spec)
print(f"  {len(parts)} isotypic factor(s); total class {regconst_graded(spec, (0,), (1,)).rep}")
