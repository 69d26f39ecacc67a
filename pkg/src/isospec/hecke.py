"""Hecke-character group dumps and the shady-character classifier.

A dump describes the group of unitary Hecke characters of conductor dividing
a bound for a quadratic extension L/F, modulo the norm line: a basis with
exact integer angular parameters k and decimal t-parameters with error
bounds, the exact Galois action on exponent vectors, and the exact sublattice
where every archimedean s-parameter vanishes.  All existence verdicts rest
on integer data only; the decimals enter reports and eigenvalue separation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .lattice import (
    IntLattice,
    box_points,
    from_columns,
    hnf_basis,
    kernel_basis,
    lattices_equal,
    mat_mul,
    mat_vec,
    solve_integer,
)

SCHEMA = "hcg-1"

PLACE_KINDS = ("complex", "real-ramified", "real-split")

KINDS = ("l2", "omega-all", "omega-0", "h-bullet")


class DumpError(ValueError):
    pass


class ClassifierInputError(ValueError):
    pass


class PrecisionDemandError(RuntimeError):
    pass


@dataclass
class PlaceTag:
    label: str
    kind: str
    ramified_in_D: bool
    embeddings: list
    conjugate_pair: bool = False


@dataclass
class BasisChar:
    name: str
    k: dict
    t: dict          # label -> Fraction (exact decimal)
    t_err: dict      # label -> Fraction
    conductor_norm: int


class HeckeCharGroupDump:
    def __init__(self, data):
        if data.get("schema") != SCHEMA:
            raise DumpError(f"expected schema {SCHEMA!r}")
        self.raw = data
        self.name = data.get("name", "")
        self.field_F = data.get("field_F", {})
        self.field_L = data.get("field_L", {})
        self.places = [
            PlaceTag(p["label"], p["kind"], bool(p["ramified_in_D"]),
                     list(p["embeddings"]), bool(p.get("conjugate_pair", False)))
            for p in data["places"]
        ]
        for p in self.places:
            if p.kind not in PLACE_KINDS:
                raise DumpError(f"unknown place kind {p.kind!r}")
            want = 1 if p.kind == "real-ramified" else 2
            if len(p.embeddings) != want:
                raise DumpError(f"place {p.label}: expected {want} embedding classes")
        self.embedding_labels = [e for p in self.places for e in p.embeddings]
        if len(set(self.embedding_labels)) != len(self.embedding_labels):
            raise DumpError("duplicate embedding labels")
        self.rank = int(data["rank"])
        self.torsion = [int(d) for d in data.get("torsion", [])]
        self.basis = []
        for b in data["basis"]:
            k = {lbl: int(v) for lbl, v in b["k"].items()}
            t = {lbl: Fraction(str(v["value"])) for lbl, v in b["t"].items()}
            terr = {lbl: Fraction(str(v["err"])) for lbl, v in b["t"].items()}
            self.basis.append(
                BasisChar(b["name"], k, t, terr, int(b.get("conductor_norm", 1)))
            )
        if len(self.basis) != self.rank:
            raise DumpError("basis size differs from the stated rank")
        self.sigma = [[int(v) for v in row] for row in data["sigma_matrix"]]
        self.s_kernel = [[int(v) for v in col] for col in data["s_kernel"]]
        self.conductor_bound_norm = int(data.get("conductor_bound_norm", 1))
        self.precision = Fraction(str(data.get("precision", "1e-3")))
        self.validate()

    # -- raw tables ---------------------------------------------------------

    def k_matrix(self):
        return [
            [b.k[lbl] for b in self.basis] for lbl in self.embedding_labels
        ]

    def t_matrix(self):
        return [
            [b.t[lbl] for b in self.basis] for lbl in self.embedding_labels
        ]

    def t_err_matrix(self):
        return [
            [b.t_err[lbl] for b in self.basis] for lbl in self.embedding_labels
        ]

    def place_of_embedding(self, label):
        for p in self.places:
            if label in p.embeddings:
                return p
        raise DumpError(f"unknown embedding {label}")

    def _sigma_permutations(self):
        """Row permutation/sign action of the Galois involution on the k and
        t tables: swap the embedding pair at split/complex places (negating k
        when the chosen representatives restrict to conjugate embeddings of
        the base); negate k and keep t at real places of F below a complex
        place of L."""
        labels = self.embedding_labels
        idx = {lbl: i for i, lbl in enumerate(labels)}
        n = len(labels)
        perm = list(range(n))
        ksign = [1] * n
        for p in self.places:
            if p.kind == "real-ramified":
                ksign[idx[p.embeddings[0]]] = -1
            else:
                a, b = (idx[p.embeddings[0]], idx[p.embeddings[1]])
                perm[a], perm[b] = b, a
                if p.conjugate_pair:
                    ksign[a] = -1
                    ksign[b] = -1
        return perm, ksign

    def validate(self):
        r = self.rank
        if len(self.sigma) != r or any(len(row) != r for row in self.sigma):
            raise DumpError("sigma matrix has wrong shape")
        s2 = mat_mul(self.sigma, self.sigma)
        if s2 != [[1 if i == j else 0 for j in range(r)] for i in range(r)]:
            raise DumpError("sigma matrix is not an involution")
        K = self.k_matrix()
        perm, ksign = self._sigma_permutations()
        KS = mat_mul(K, self.sigma)
        for i in range(len(K)):
            for j in range(r):
                if KS[i][j] != ksign[perm[i]] * K[perm[i]][j]:
                    raise DumpError("sigma action inconsistent with the k table")
        T = self.t_matrix()
        TE = self.t_err_matrix()
        TS = mat_mul(T, self.sigma)
        for i in range(len(T)):
            for j in range(r):
                bound = sum(abs(self.sigma[l][j]) * TE[i][l] for l in range(r)) + TE[perm[i]][j]
                if abs(TS[i][j] - T[perm[i]][j]) > bound:
                    raise DumpError("sigma action inconsistent with the t table")
        # s-kernel: sigma-stable, independent columns, t vanishes within bounds
        if self.s_kernel:
            for col in self.s_kernel:
                if len(col) != r:
                    raise DumpError("s_kernel column has wrong length")
            M = from_columns(self.s_kernel, nrows=r)
            SM = mat_mul(self.sigma, M)
            if not lattices_equal(M, SM):
                raise DumpError("s_kernel is not sigma-stable")
            for col in self.s_kernel:
                tval, terr = self.t_of(col)
                for lbl in self.embedding_labels:
                    if abs(tval[lbl]) > terr[lbl]:
                        raise DumpError("s_kernel member has a nonvanishing t parameter")
        if self.torsion:
            # torsion characters are finite order: k = 0 at complex places
            pass

    # -- evaluation ---------------------------------------------------------

    def k_of(self, vector):
        K = self.k_matrix()
        vals = mat_vec(K, list(vector))
        return dict(zip(self.embedding_labels, vals))

    def t_of(self, vector):
        T = self.t_matrix()
        TE = self.t_err_matrix()
        vals = mat_vec(T, [Fraction(v) for v in vector])
        errs = [
            sum(abs(Fraction(v)) * TE[i][j] for j, v in enumerate(vector))
            for i in range(len(TE))
        ]
        return (
            dict(zip(self.embedding_labels, vals)),
            dict(zip(self.embedding_labels, errs)),
        )

    def describe(self, vector):
        k = self.k_of(vector)
        t, te = self.t_of(vector)
        return {
            "exponents": list(vector),
            "k": k,
            "t": {lbl: str(t[lbl]) for lbl in self.embedding_labels},
        }


def load_dump(path) -> HeckeCharGroupDump:
    with open(path) as fh:
        return HeckeCharGroupDump(json.load(fh))


# ---------------------------------------------------------------------------
# minus subgroup and k-projection


def minus_subgroup(dump: HeckeCharGroupDump):
    """Basis (columns) of the kernel of (1 + sigma): the exponent vectors
    whose Galois twist times themselves has finite order."""
    r = dump.rank
    A = [[dump.sigma[i][j] + (1 if i == j else 0) for j in range(r)] for i in range(r)]
    return kernel_basis(A)


def k_projection(dump: HeckeCharGroupDump, sublattice_cols, selected):
    """Image lattice of the k-parameters at the selected embeddings."""
    K = dump.k_matrix()
    idx = {lbl: i for i, lbl in enumerate(dump.embedding_labels)}
    rows = [K[idx[lbl]] for lbl in selected]
    img_cols = [mat_vec(rows, col) for col in sublattice_cols]
    lat = IntLattice.span(len(selected), img_cols)
    # torsion characters only shift parities at real places of L; with a
    # totally complex L there are no shifts
    shifts = [[0] * len(selected)]
    return lat, shifts


def default_selected_embeddings(dump: HeckeCharGroupDump):
    """One representative per place: the first embedding label."""
    return [p.embeddings[0] for p in dump.places]


# ---------------------------------------------------------------------------
# classification


@dataclass
class ShadyReport:
    kind: str
    exists: bool
    reps: list = field(default_factory=list)        # exponent vectors
    kernel: list = field(default_factory=list)      # free generators of the solution line(s)
    torsion_reps: list = field(default_factory=list)
    level_check: str = "trivial-level"
    rules: list = field(default_factory=list)
    selected: list = field(default_factory=list)

    def solution_vectors(self, n_range=range(-3, 4)):
        out = set()
        for rep in self.reps:
            if not self.kernel:
                out.add(tuple(rep))
            else:
                for n in n_range:
                    v = list(rep)
                    for g in self.kernel:
                        v = [a + n * b for a, b in zip(v, g)]
                    out.add(tuple(v))
        return out


def _embedding_boxes(dump, kind, report):
    """Per-selected-embedding k-constraints for the requested kind; None when
    the kind is structurally impossible."""
    boxes = []
    selected = []
    for p in dump.places:
        lbl = p.embeddings[0]
        if p.kind == "real-ramified":
            if kind == "l2":
                boxes.append("odd")
            else:
                boxes.append({-1, 1})
            if kind == "omega-0" and not p.ramified_in_D:
                report.rules.append(
                    f"place {p.label}: functions-only shadiness needs the algebra "
                    "ramified at every real place below a complex place"
                )
                return None, None
            selected.append(lbl)
        elif p.kind == "complex":
            if kind == "l2":
                boxes.append(None)
            elif kind == "omega-all":
                boxes.append({-1, 0, 1})
            elif kind == "omega-0":
                boxes.append({0})
            elif kind == "h-bullet":
                boxes.append({-1, 1})
            selected.append(lbl)
        elif p.kind == "real-split":
            if p.ramified_in_D:
                report.rules.append(
                    f"place {p.label}: a real place split in L cannot carry the "
                    "single-place condition at a ramified place of the algebra"
                )
                return None, None
            if kind == "h-bullet":
                report.rules.append(
                    f"place {p.label}: harmonic shadiness needs every real place "
                    "to sit below a complex place"
                )
                return None, None
            boxes.append(None)  # parity-only constraints, no finite box
            selected.append(lbl)
    return boxes, selected


def _level_check(dump, scenario, report):
    """Conductor-divisibility screen for nonvanishing of the fixed vectors:
    disc(L/F) * relative-norm of the conductor must divide level * delta_D."""
    n_norm = int(scenario.get("level_norm", 1))
    dd_norm = int(scenario.get("delta_D_norm", 1))
    rel_disc_norm = int(dump.field_L.get("disc_rel_norm", 1))
    cond = dump.conductor_bound_norm
    if rel_disc_norm == 1 and cond == 1:
        report.level_check = "trivial-level"
        return True
    if rel_disc_norm * cond <= n_norm * dd_norm:
        report.level_check = "conservative-divisibility"
        report.rules.append(
            "level screen passed on ideal norms only; over-reporting is possible"
        )
        return True
    report.level_check = "conductor-excluded"
    return False


def _ramification_consistent(dump, scenario):
    ram = set(scenario.get("d_ramified_places", [p.label for p in dump.places if p.ramified_in_D]))
    for p in dump.places:
        if (p.label in ram) != p.ramified_in_D:
            raise ClassifierInputError(
                f"scenario and dump disagree on ramification at {p.label}"
            )


def classify_shady(dump: HeckeCharGroupDump, kind, scenario=None) -> ShadyReport:
    """Existence and structure of the shady characters of the requested kind.

    All decisions are exact: box constraints on the k-lattice of the minus
    subgroup, membership in the exact s-kernel where all archimedean
    parameters must vanish, and the conductor screen on integer norms.
    """
    if kind not in KINDS:
        raise ClassifierInputError(f"unknown kind {kind!r}; expected one of {KINDS}")
    scenario = scenario or {}
    _ramification_consistent(dump, scenario)
    report = ShadyReport(kind=kind, exists=False)
    boxes, selected = _embedding_boxes(dump, kind, report)
    if boxes is None:
        report.rules.append("structural place conditions fail; no such character")
        return report
    report.selected = selected
    if not _level_check(dump, scenario, report):
        report.rules.append("conductor divisibility excludes the fixed vectors")
        return report

    minus = minus_subgroup(dump)
    if kind == "h-bullet":
        # intersect with the exact s-kernel: all archimedean parameters vanish
        lattice_cols = _intersect_lattices(minus, dump.s_kernel, dump.rank)
        report.rules.append("solutions constrained to the exact s-kernel")
    else:
        lattice_cols = minus
    if not lattice_cols:
        report.rules.append("candidate lattice is trivial")
        if kind == "l2":
            return report
    if kind == "l2":
        return _classify_l2(dump, report, lattice_cols)

    finite_boxes = [b for b in boxes if b is not None]
    finite_selected = [s for b, s in zip(boxes, selected) if b is not None]
    lat, shifts = k_projection(dump, lattice_cols, finite_selected)
    pts = []
    for shift in shifts:
        pts.extend(box_points(lat, shift, finite_boxes))
    pts = sorted(set(pts))
    if not pts:
        report.rules.append("k-lattice box is empty")
        return report
    report.exists = True
    # kernel of the projection restricted to the candidate lattice
    K = dump.k_matrix()
    idx = {lbl: i for i, lbl in enumerate(dump.embedding_labels)}
    rows = [K[idx[lbl]] for lbl in finite_selected]
    A = [[mat_vec(rows, col)[i] for col in lattice_cols] for i in range(len(rows))]
    ker = kernel_basis(A) if lattice_cols else []
    kernel_vecs = [
        _combine(lattice_cols, coeffs) for coeffs in ker
    ]
    reps = []
    for b in pts:
        coeffs = solve_integer(A, list(b))
        if coeffs is None:
            raise ClassifierInputError("box point not realized on the lattice")
        rep = _combine(lattice_cols, coeffs)
        reps.append(_reduce_rep(dump, rep, kernel_vecs))
    report.reps = reps
    report.kernel = kernel_vecs
    report.rules.append(f"k-lattice box solutions at {finite_selected}: {pts}")
    return report


def _combine(cols, coeffs):
    r = len(cols[0]) if cols else 0
    out = [0] * r
    for c, col in zip(coeffs, cols):
        out = [a + c * b for a, b in zip(out, col)]
    return out


def _intersect_lattices(cols_a, cols_b, ambient):
    """Intersection of two saturated sublattices of Z^r (as column lists)."""
    if not cols_a or not cols_b:
        return []
    import sympy

    A = sympy.Matrix(from_columns(cols_a, nrows=ambient))
    B = sympy.Matrix(from_columns(cols_b, nrows=ambient))
    M = A.row_join(-B)
    null = M.nullspace()
    out = []
    for v in null:
        den = sympy.lcm([sympy.fraction(t)[1] for t in v]) if len(v) else 1
        w = [int(t * den) for t in v]
        vec = [0] * ambient
        for c, col in zip(w[: len(cols_a)], cols_a):
            vec = [a + c * b for a, b in zip(vec, col)]
        g = math.gcd(*[abs(t) for t in vec]) if any(vec) else 1
        out.append([t // g for t in vec])
    if not out:
        return []
    return hnf_basis(from_columns(out, nrows=ambient))


def _reduce_rep(dump, rep, kernel_vecs):
    """Deterministic representative: minimize the t-norm over small kernel
    shifts (the kernel directions carry nonzero t, so this is a proper CVP
    at tiny rank)."""
    if not kernel_vecs:
        return rep
    best = None
    import itertools as it

    for coeffs in it.product(range(-5, 6), repeat=len(kernel_vecs)):
        v = list(rep)
        for c, g in zip(coeffs, kernel_vecs):
            v = [a + c * b for a, b in zip(v, g)]
        t, _ = dump.t_of(v)
        norm = sum(Fraction(x) ** 2 for x in t.values())
        key = (norm, tuple(v))
        if best is None or key < best[0]:
            best = (key, v)
    return best[1]


def _classify_l2(dump, report, lattice_cols):
    """Parity feasibility: an element of the minus lattice with odd k at every
    real place of F ramified in the algebra and sitting below a complex place."""
    targets = []
    K = dump.k_matrix()
    idx = {lbl: i for i, lbl in enumerate(dump.embedding_labels)}
    rows = []
    for p in dump.places:
        if p.kind == "real-ramified" and p.ramified_in_D:
            rows.append(K[idx[p.embeddings[0]]])
            targets.append(1)
    if not rows:
        report.exists = True
        report.reps = [[0] * dump.rank]
        report.rules.append("no parity constraints: the trivial character qualifies")
        return report
    A = [[sum(a * b for a, b in zip(r, col)) for col in lattice_cols] for r in rows]
    # solve A c = 1 (mod 2)
    m = len(lattice_cols)
    aug = [[A[i][j] % 2 for j in range(m)] + [targets[i]] for i in range(len(rows))]
    sol = _solve_mod2(aug, m)
    if sol is None:
        report.rules.append("parity system unsolvable on the minus lattice")
        return report
    report.exists = True
    rep = _combine(lattice_cols, sol)
    report.reps = [rep]
    report.rules.append("odd angular parameters at every ramified real place")
    # kernel of the parity system: a finite-index sublattice remains free
    report.kernel = lattice_cols
    return report


def _solve_mod2(aug, m):
    rows = [list(r) for r in aug]
    pivots = []
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] & 1), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] & 1:
                rows[i] = [(a + b) % 2 for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    for i in range(r, len(rows)):
        if rows[i][m] & 1:
            return None
    sol = [0] * m
    for i, c in enumerate(pivots):
        sol[c] = rows[i][m] & 1
    return sol


# ---------------------------------------------------------------------------
# Casimir eigenvalues


@dataclass
class EigenvalueData:
    per_place: dict
    total: Fraction
    err: Fraction
    degrees: dict


def admissible_degrees(dump, place, k_val):
    if place.kind == "real-ramified":
        if abs(k_val) != 1:
            return None
        return [0] if place.ramified_in_D else [1]
    if place.kind == "complex":
        if k_val == 0:
            return [0, 1, 2, 3]
        if abs(k_val) == 1:
            return [1, 2]
        return None
    if place.kind == "real-split":
        return [0, 1, 2]
    return None


def casimir_lambda(dump: HeckeCharGroupDump, vector, degrees) -> EigenvalueData:
    """Per-place Casimir eigenvalues of the twist attached to the character.

    degrees: dict place-label -> form degree at that place.
    """
    k = dump.k_of(vector)
    t, terr = dump.t_of(vector)
    per_place = {}
    total = Fraction(0)
    err = Fraction(0)
    for p in dump.places:
        lbl = p.embeddings[0]
        kv = k[lbl]
        adm = admissible_degrees(dump, p, kv)
        iv = degrees.get(p.label)
        if adm is None or iv not in adm:
            raise ClassifierInputError(
                f"place {p.label}: angular parameter {kv} admits degrees {adm}, got {iv}"
            )
        tv, te = t[lbl], terr[lbl]
        if p.kind == "real-ramified":
            lam = Fraction(0)
            e = Fraction(0)
        elif p.kind == "complex":
            if kv == 0:
                lam = 1 + 4 * tv * tv
            else:
                lam = 4 * tv * tv
            e = 8 * abs(tv) * te + 4 * te * te
        else:  # real-split
            lam = Fraction(1, 4) + tv * tv
            e = 2 * abs(tv) * te + te * te
        per_place[p.label] = (lam, e)
        total += lam
        err += e
    return EigenvalueData(per_place, total, err, dict(degrees))


def degree_assignments(dump, vector, total_degree):
    """All per-place degree vectors summing to the requested degree that are
    admissible for the character's angular parameters."""
    k = dump.k_of(vector)
    options = []
    for p in dump.places:
        adm = admissible_degrees(dump, p, k[p.embeddings[0]])
        if adm is None:
            return []
        options.append([(p.label, i) for i in adm])
    import itertools as it

    out = []
    for combo in it.product(*options):
        if sum(i for _, i in combo) == total_degree:
            out.append(dict(combo))
    return out


# ---------------------------------------------------------------------------
# eigenvalue-ball enumeration, certificates, counting


def _enumerate_line(dump, report, lam_bound):
    """All solution-set members with eigenvalue at most the bound, assuming
    the solution set is reps + Z*kernel with at most one kernel generator."""
    if not report.exists:
        return []
    if len(report.kernel) > 1:
        raise ClassifierInputError("enumeration implemented for line-shaped solution sets")
    out = []
    seen = set()
    for rep in report.reps:
        if not report.kernel:
            if tuple(rep) not in seen:
                seen.add(tuple(rep))
                out.append(rep)
            continue
        gen = report.kernel[0]
        # |t| grows linearly along the line; walk both directions
        n = 0
        while True:
            hit = False
            for sgn in ((1,) if n == 0 else (1, -1)):
                v = [a + sgn * n * b for a, b in zip(rep, gen)]
                lam = _total_lambda(dump, v)
                if lam is not None and lam[0] - lam[1] <= lam_bound:
                    if n > 32 and lam[1] >= max(lam[0], 1):
                        raise PrecisionDemandError(
                            "analytic error bounds dominate the eigenvalues; "
                            "a higher-precision dump is required"
                        )
                    if tuple(v) not in seen:
                        seen.add(tuple(v))
                        out.append(v)
                    hit = True
            if not hit and n > 2:
                break
            n += 1
    return out


def _total_lambda(dump, vector):
    """Total eigenvalue with error, using the minimal admissible degrees."""
    k = dump.k_of(vector)
    t, terr = dump.t_of(vector)
    total = Fraction(0)
    err = Fraction(0)
    for p in dump.places:
        lbl = p.embeddings[0]
        kv = k[lbl]
        tv, te = t[lbl], terr[lbl]
        if p.kind == "real-ramified":
            if abs(kv) != 1:
                return None
        elif p.kind == "complex":
            if kv == 0:
                total += 1 + 4 * tv * tv
            elif abs(kv) == 1:
                total += 4 * tv * tv
            else:
                return None
            err += 8 * abs(tv) * te + 4 * te * te
        else:
            total += Fraction(1, 4) + tv * tv
            err += 2 * abs(tv) * te + te * te
    return total, err


@dataclass
class Certificate:
    degree: int
    lam: Fraction
    lam_err: Fraction
    pair: list
    conductor_square: bool
    verdict: str


def non_isospectral_certificate(dump, scenario, degree, lam_bound=4000):
    """Search for an eigenvalue carried by exactly one inverse pair of
    degree-compatible shady characters; its multiplicity on one side is then
    odd and the orbifolds cannot be isospectral in that degree."""
    scenario = scenario or {}
    if int(scenario.get("delta_D_norm", 1)) != 1:
        raise ClassifierInputError("certificate requires a trivial algebra discriminant")
    if int(scenario.get("component_group_order", 2)) != 2:
        raise ClassifierInputError("certificate requires a component group of order 2")
    for p in dump.places:
        if p.kind == "real-split" and p.ramified_in_D:
            raise ClassifierInputError("certificate requires no real place split in the algebra")
        if p.kind == "real-ramified" and not p.ramified_in_D:
            raise ClassifierInputError(
                "certificate requires the algebra ramified at every real place"
            )
    report = classify_shady(dump, "omega-all", scenario)
    if not report.exists:
        return None
    members = _enumerate_line(dump, report, Fraction(lam_bound))
    entries = []
    for v in members:
        for deg in degree_assignments(dump, v, degree):
            lam = casimir_lambda(dump, v, deg)
            entries.append((lam.total, lam.err, tuple(v)))
    if not entries:
        return None
    entries.sort()
    # cluster by overlapping eigenvalue intervals
    clusters = []
    for lam, err, v in entries:
        if clusters and lam - err <= clusters[-1]["hi"]:
            c = clusters[-1]
            c["hi"] = max(c["hi"], lam + err)
            c["members"].add(v)
        else:
            clusters.append({"lo": lam - err, "hi": lam + err, "members": {v}, "lam": lam, "err": err})
    for i, c in enumerate(clusters):
        if i + 1 < len(clusters) and clusters[i + 1]["lo"] <= c["hi"]:
            raise PrecisionDemandError(
                "eigenvalue clusters are not separated at the dump precision"
            )
        mem = c["members"]
        if len(mem) == 2:
            a, b = sorted(mem)
            if all(x == -y for x, y in zip(a, b)):
                cond_ratio_sq = _conductor_ratio_square(dump, scenario)
                if cond_ratio_sq:
                    return Certificate(
                        degree, c["lam"], c["err"], [list(a), list(b)], True,
                        f"not-{degree}-isospectral",
                    )
    return None


def _conductor_ratio_square(dump, scenario):
    n_norm = int(scenario.get("level_norm", 1))
    cond = dump.conductor_bound_norm
    if cond == 1 and n_norm == 1:
        return True
    ratio = Fraction(n_norm, cond * cond)  # norm of N / N_{L/F}(F) on norms
    if ratio.denominator != 1:
        return False
    v = int(ratio)
    return math.isqrt(v) ** 2 == v


def count_shady_upto(dump, kind, scenario, bound):
    """Exact count of shady characters of the kind with total eigenvalue <= bound."""
    report = classify_shady(dump, kind, scenario)
    if not report.exists:
        return 0
    members = _enumerate_line(dump, report, Fraction(bound))
    count = 0
    for v in members:
        lam = _total_lambda(dump, v)
        if lam is None:
            continue
        if lam[0] + lam[1] <= Fraction(bound):
            count += 1
        elif lam[0] - lam[1] <= Fraction(bound):
            raise PrecisionDemandError("eigenvalue too close to the counting bound")
    return count


def growth_exponent(counts):
    """Least-squares slope of log(count) against log(T)."""
    pts = [(math.log(t), math.log(c)) for t, c in counts if c > 0]
    n = len(pts)
    sx = sum(p[0] for p in pts)
    sy = sum(p[1] for p in pts)
    sxx = sum(p[0] * p[0] for p in pts)
    sxy = sum(p[0] * p[1] for p in pts)
    return (n * sxy - sx * sy) / (n * sxx - sx * sx)
