"""Example-reproduction driver: run the full pipeline for a packaged
scenario and diff the outcomes against its checked-in expected file."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import hecke, nf
from .hecke import (
    HeckeCharGroupDump,
    _enumerate_line,
    _total_lambda,
    classify_shady,
    count_shady_upto,
    default_selected_embeddings,
    growth_exponent,
    k_projection,
    minus_subgroup,
    non_isospectral_certificate,
)
from .lattice import IntLattice, from_columns, lattices_equal

EXAMPLE_IDS = ("lv", "small-iso", "zero-not-one", "zero-betti", "hnot0")

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_VALIDATION = 3
EXIT_PRECISION = 4


class ExpectationError(ValueError):
    pass


def fixture_path(name):
    return resources.files("isospec").joinpath("fixtures", name)


def load_fixture_json(name):
    with fixture_path(name).open() as fh:
        return json.load(fh)


def _sha256(data):
    return hashlib.sha256(json.dumps(data, sort_keys=True).encode()).hexdigest()


@dataclass
class CheckResult:
    check: str
    passed: bool
    rule: str
    expected: object = None
    got: object = None


@dataclass
class ExampleReport:
    example: str
    results: list = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(r.passed for r in self.results)

    def to_json(self):
        return {
            "example": self.example,
            "passed": self.passed,
            "provenance": self.provenance,
            "checks": [
                {
                    "check": r.check,
                    "passed": r.passed,
                    "rule": r.rule,
                    "expected": r.expected,
                    "got": r.got,
                }
                for r in self.results
            ],
        }


class ExampleContext:
    """Lazily computed pipeline pieces shared between checks."""

    def __init__(self, scenario, prime_bound=10 ** 7):
        self.scenario = scenario
        self.prime_bound = prime_bound
        self._dump = None
        self._reports = {}
        self._field = None

    @property
    def dump(self) -> HeckeCharGroupDump:
        if self._dump is None:
            self._dump = HeckeCharGroupDump(load_fixture_json(self.scenario["dump"]))
        return self._dump

    @property
    def field_spec(self):
        if self._field is None:
            f = self.scenario["field"]
            self._field = nf.parse_field(
                f["poly"], index_cofactor=f.get("index_cofactor", 1),
                asserted_disc=f.get("disc"), asserted_signature=tuple(f["signature"]),
            )
        return self._field

    def zeta_overrides(self):
        raw = self.scenario.get("zeta_overrides", {})
        return {int(p): [tuple(ef) for ef in v] for p, v in raw.items()}

    def classify(self, kind):
        if kind not in self._reports:
            self._reports[kind] = classify_shady(self.dump, kind, self.scenario)
        return self._reports[kind]

    def eigenvalue_list(self, kind, n, bound=4000):
        rep = self.classify(kind)
        members = _enumerate_line(self.dump, rep, Fraction(bound))
        lams = sorted({_total_lambda(self.dump, v)[0] for v in members})
        return [float(x) for x in lams[:n]]

    def overall_verdict(self):
        sc = self.scenario
        if "repequiv" in sc:
            verdict, _ = nf.repequiv_criterion(sc["repequiv"])
            if verdict == "representation-equivalent":
                return verdict
        omega_all = self.classify("omega-all")
        if not omega_all.exists:
            return "isospectral-for-all-degrees"
        omega0 = self.classify("omega-0")
        hb = self.classify("h-bullet")
        cert0 = non_isospectral_certificate(self.dump, sc, 0)
        cert1 = non_isospectral_certificate(self.dump, sc, 1)
        if not omega0.exists and hb.exists and not hb.kernel and len(hb.reps) == 2:
            return "betti-numbers-differ"
        if not omega0.exists and cert1 is not None:
            return "zero-isospectral-but-not-one-isospectral"
        if cert0 is not None and not hb.exists:
            return "not-isospectral-regulator-quotient-rational"
        return "inconclusive"


def run_check(ctx: ExampleContext, check) -> CheckResult:
    if "source" not in check:
        raise ExpectationError(f"untagged expectation: {check}")
    kind = check["check"]
    if kind == "volume":
        vol, err = nf.covolume(
            ctx.field_spec, prime_bound=ctx.prime_bound, overrides=ctx.zeta_overrides()
        )
        ok = abs(vol - check["value"]) / check["value"] <= check["rtol"] + err / check["value"]
        return CheckResult("volume", ok, "volume formula at the packaged field data",
                           check["value"], vol)
    if kind == "repequiv":
        verdict, reason = nf.repequiv_criterion(ctx.scenario["repequiv"])
        return CheckResult("repequiv", verdict == check["verdict"], reason,
                           check["verdict"], verdict)
    if kind == "minus-rank":
        got = len(minus_subgroup(ctx.dump))
        return CheckResult("minus-rank", got == check["value"],
                           "rank of the finite-order-twist sublattice",
                           check["value"], got)
    if kind == "minus-table":
        dump = ctx.dump
        minus = minus_subgroup(dump)
        combos = check["combos"]
        ok = lattices_equal(
            from_columns(minus, nrows=dump.rank),
            from_columns([list(c) for c in combos], nrows=dump.rank),
        )
        labels = dump.embedding_labels
        atol = Fraction(str(check["atol"]))
        detail = []
        for combo, krow, trow in zip(combos, check["k"], check["t"]):
            kv = dump.k_of(combo)
            tv, terr = dump.t_of(combo)
            for lbl, kexp, texp in zip(labels, krow, trow):
                if kv[lbl] != kexp:
                    ok = False
                    detail.append(f"k mismatch at {lbl}")
                if abs(tv[lbl] - Fraction(str(texp))) > atol + terr[lbl]:
                    ok = False
                    detail.append(f"t mismatch at {lbl}")
        return CheckResult("minus-table", ok,
                           "; ".join(detail) or "printed basis data reproduced",
                           None, None)
    if kind == "k-lattice":
        dump = ctx.dump
        lat, _ = k_projection(dump, minus_subgroup(dump), default_selected_embeddings(dump))
        want = IntLattice.span(len(check["matrix"]),
                               [list(c) for c in zip(*check["matrix"])])
        return CheckResult("k-lattice", lat == want,
                           "angular-parameter lattice equals the printed reduced basis",
                           check["matrix"], lat.hnf_matrix())
    if kind == "classify":
        rep = ctx.classify(check["kind"])
        return CheckResult(f"classify[{check['kind']}]", rep.exists == check["exists"],
                           "; ".join(rep.rules), check["exists"], rep.exists)
    if kind == "solution-set":
        rep = ctx.classify(check["kind"])
        reps_ok = {tuple(r) for r in rep.reps} == {tuple(r) for r in check["reps"]}
        if check["kernel"]:
            ker_ok = lattices_equal(
                from_columns(rep.kernel, nrows=ctx.dump.rank),
                from_columns([list(k) for k in check["kernel"]], nrows=ctx.dump.rank),
            )
        else:
            ker_ok = not rep.kernel
        return CheckResult(f"solution-set[{check['kind']}]", reps_ok and ker_ok,
                           "solution set matches the printed generators",
                           check["reps"], rep.reps)
    if kind == "eigenvalues":
        vals = ctx.eigenvalue_list(check["kind"], len(check["values"]))
        ok = len(vals) == len(check["values"]) and all(
            abs(a - b) <= check["atol"] for a, b in zip(vals, check["values"])
        )
        return CheckResult("eigenvalues", ok,
                           "ordered Laplace eigenvalues of the solution line",
                           check["values"], vals)
    if kind == "certificate":
        cert = non_isospectral_certificate(ctx.dump, ctx.scenario, check["degree"])
        if cert is None:
            return CheckResult(f"certificate[{check['degree']}]", False,
                               "no odd-multiplicity eigenvalue found",
                               check["lambda"], None)
        ok = abs(float(cert.lam) - check["lambda"]) <= check["atol"]
        return CheckResult(f"certificate[{check['degree']}]", ok,
                           f"unique inverse pair at the minimal eigenvalue; {cert.verdict}",
                           check["lambda"], float(cert.lam))
    if kind == "certificate-none":
        cert = non_isospectral_certificate(ctx.dump, ctx.scenario, check["degree"])
        return CheckResult("certificate-none", cert is None,
                           "no odd-multiplicity certificate expected", None,
                           None if cert is None else float(cert.lam))
    if kind == "count":
        got = count_shady_upto(ctx.dump, check["kind"], ctx.scenario, check["upto"])
        return CheckResult("count", got == check["value"],
                           f"characters with eigenvalue at most {check['upto']}",
                           check["value"], got)
    if kind == "growth":
        counts = [
            (t, count_shady_upto(ctx.dump, check["kind"], ctx.scenario, t))
            for t in check["points"]
        ]
        exp = growth_exponent(counts)
        ok = abs(exp - check["exponent"]) <= check["tol"]
        return CheckResult("growth", ok, f"counts {counts}", check["exponent"], exp)
    if kind == "sset":
        block = ctx.scenario["sset"]
        res = nf.sset_numeric(
            block["base_coeffs"], block["rel_trace"], block["rel_norm"],
            block["units"], base_primes=block.get("base_primes", ()),
        )
        got = "finite" if res.finite else "infinite"
        return CheckResult("sset", got == check["verdict"], res.detail,
                           check["verdict"], got)
    if kind == "regulator-quotient":
        hb = ctx.classify("h-bullet")
        got = "rational" if not hb.exists else "undetermined"
        return CheckResult("regulator-quotient", got == check["value"],
                           "no harmonic obstruction: free homology components "
                           "are linked and the quotient of squared regulators is rational",
                           check["value"], got)
    if kind == "verdict":
        got = ctx.overall_verdict()
        return CheckResult("verdict", got == check["value"],
                           "aggregate of the classification pipeline",
                           check["value"], got)
    raise ExpectationError(f"unknown check {kind!r}")


def verify_example(example_id, prime_bound=10 ** 7) -> ExampleReport:
    if example_id not in EXAMPLE_IDS:
        raise ExpectationError(f"unknown example {example_id!r}; expected {EXAMPLE_IDS}")
    scenario = load_fixture_json(f"{example_id}.scenario.json")
    expected = load_fixture_json(scenario["expected"])
    ctx = ExampleContext(scenario, prime_bound=prime_bound)
    report = ExampleReport(example_id)
    report.provenance = {
        "scenario": _sha256(scenario),
        "expected": _sha256(expected),
    }
    if "dump" in scenario:
        report.provenance["dump"] = _sha256(load_fixture_json(scenario["dump"]))
    for check in expected:
        report.results.append(run_check(ctx, check))
    return report


def run_suite(example_ids=EXAMPLE_IDS, prime_bound=10 ** 7):
    return [verify_example(e, prime_bound=prime_bound) for e in example_ids]
