"""End-to-end walkthrough of the four packaged examples.

For each orbifold pair: load the character-group dump, cut out the
finite-order-twist sublattice, project the angular parameters onto the
printed reduced lattice, classify the obstruction kinds, and, where an
obstruction line exists, list its eigenvalues and the parity certificate.
"""

from fractions import Fraction

from isospec.hecke import (
    HeckeCharGroupDump,
    classify_shady,
    count_shady_upto,
    default_selected_embeddings,
    k_projection,
    minus_subgroup,
    non_isospectral_certificate,
)
from isospec.hecke import _enumerate_line, _total_lambda
from isospec.verify import load_fixture_json

for name in ["small-iso", "zero-not-one", "zero-betti", "hnot0"]:
    dump = HeckeCharGroupDump(load_fixture_json(f"{name}.hcg.json"))
    print(f"=== {name} ===")
    minus = minus_subgroup(dump)
    print(f"character group rank {dump.rank}; finite-order-twist sublattice rank {len(minus)}")
    lat, _ = k_projection(dump, minus, default_selected_embeddings(dump))
    print("angular lattice (canonical basis):")
    for row in lat.hnf_matrix():
        print("   ", row)
    for kind in ["omega-all", "omega-0", "h-bullet"]:
        rep = classify_shady(dump, kind)
        status = "exists" if rep.exists else "none"
        print(f"  {kind:9s}: {status}")
        if rep.exists and rep.kernel:
            members = _enumerate_line(dump, rep, Fraction(3000))
            lams = sorted({float(_total_lambda(dump, v)[0]) for v in members})
            print(f"      eigenvalues of the line: {[round(x, 4) for x in lams[:5]]}")
        elif rep.exists:
            print(f"      finite solution set: {rep.reps}")
    for degree in (0, 1):
        cert = non_isospectral_certificate(dump, {}, degree)
        if cert:
            print(f"  certificate: {cert.verdict} at eigenvalue {float(cert.lam):.4f}")
    if classify_shady(dump, "omega-all").exists:
        n = count_shady_upto(dump, "omega-all", {}, 300)
        print(f"  characters with eigenvalue <= 300: {n}")
    print()
