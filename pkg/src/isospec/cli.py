"""Command-line interface: classification, certificates, counting, regulator
constants, volumes, prime sets, lattice utilities, and example verification.

Reports are byte-stable for identical inputs and seed; every verdict line
names the rule that triggered it.  Exit codes: 0 ok, 2 verdict mismatch,
3 validation error, 4 precision error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import nf
from .graded import FiniteAbelianGroup, GradedModuleSpec, regconst_graded
from .groups import FiniteGroup, GSetSum, Subgroup, is_brauer_relation, regconst_brauer, regular_rep, trivial_rep
from .hecke import (
    ClassifierInputError,
    DumpError,
    HeckeCharGroupDump,
    PrecisionDemandError,
    classify_shady,
    count_shady_upto,
    non_isospectral_certificate,
)
from .lattice import IntLattice, box_points, columns, from_columns, hnf_basis, lll_reduce
from .verify import (
    EXIT_MISMATCH,
    EXIT_OK,
    EXIT_PRECISION,
    EXIT_VALIDATION,
    ExpectationError,
    run_suite,
    verify_example,
)


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def _sha(path):
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()


def emit(args, payload, human_lines):
    payload = {"command": payload.pop("command", args.command), **payload}
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in human_lines:
            print(line)


def cmd_classify(args):
    dump = HeckeCharGroupDump(_load(args.dump))
    scenario = _load(args.scenario) if args.scenario else {}
    rep = classify_shady(dump, args.kind, scenario)
    payload = {
        "command": "classify",
        "kind": args.kind,
        "exists": rep.exists,
        "reps": rep.reps,
        "kernel": rep.kernel,
        "rules": rep.rules,
        "level_check": rep.level_check,
        "inputs": {"dump": _sha(args.dump)},
    }
    lines = [f"kind {args.kind}: {'exists' if rep.exists else 'none'}"]
    lines += [f"  rule: {r}" for r in rep.rules]
    for r in rep.reps:
        lines.append(f"  representative exponents: {r}")
    for g in rep.kernel:
        lines.append(f"  free generator: {g}")
    emit(args, payload, lines)
    return EXIT_OK


def cmd_certify(args):
    dump = HeckeCharGroupDump(_load(args.dump))
    scenario = _load(args.scenario) if args.scenario else {}
    cert = non_isospectral_certificate(dump, scenario, args.degree)
    if cert is None:
        emit(args, {"command": "certify-noniso", "certificate": None},
             [f"degree {args.degree}: no odd-multiplicity certificate"])
        return EXIT_OK
    payload = {
        "command": "certify-noniso",
        "degree": args.degree,
        "lambda": float(cert.lam),
        "lambda_err": float(cert.lam_err),
        "pair": cert.pair,
        "verdict": cert.verdict,
    }
    emit(args, payload, [
        f"degree {args.degree}: {cert.verdict} at eigenvalue {float(cert.lam):.4f}",
        "  rule: unique inverse pair with square conductor ratio gives odd multiplicity",
    ])
    return EXIT_OK


def cmd_count(args):
    dump = HeckeCharGroupDump(_load(args.dump))
    scenario = _load(args.scenario) if args.scenario else {}
    n = count_shady_upto(dump, args.kind, scenario, args.upto)
    emit(args, {"command": "count", "kind": args.kind, "upto": args.upto, "count": n},
         [f"{n} characters of kind {args.kind} with eigenvalue <= {args.upto}"])
    return EXIT_OK


def cmd_regconst(args):
    data = _load(args.spec)
    group = FiniteAbelianGroup(data["invariant_factors"])
    dims = {tuple(int(x) for x in k.split(",")): v for k, v in data["dims"].items()}
    gens = [
        {
            "name": g.get("name", f"g{i}"),
            "degree": tuple(g["degree"]),
            "matrix": [[Fraction(str(x)) for x in row] for row in g["matrix"]],
            "iota_partner": g["iota_partner"],
        }
        for i, g in enumerate(data["generators"])
    ]
    spec = GradedModuleSpec(group, dims, gens, seed=args.seed)
    c, c_to = tuple(data["pair"][0]), tuple(data["pair"][1])
    ring = data.get("ring", "Q")
    if isinstance(ring, list):
        ring = (ring[0], int(ring[1]))
    cls = regconst_graded(spec, c, c_to, ring=ring)
    emit(args, {"command": "regconst", "ring": str(ring), "class": str(cls.rep)},
         [f"regulator constant for {c} -> {c_to}: {cls.rep} over {ring}",
          "  rule: determinant quotient of a homogeneous link and its involute"])
    return EXIT_OK


def cmd_brauer(args):
    data = _load(args.input)
    G = FiniteGroup(data["mul_table"])
    S1 = GSetSum(G, [Subgroup(G, h) for h in data["S1"]])
    S2 = GSetSum(G, [Subgroup(G, h) for h in data["S2"]])
    witness = is_brauer_relation(G, S1, S2, seed=args.seed)
    payload = {"command": "brauer", "is_relation": witness is not None}
    lines = [f"relation: {'yes' if witness is not None else 'no'}"]
    if witness is not None and data.get("rep", "regular") is not None:
        rep = regular_rep(G) if data.get("rep", "regular") == "regular" else trivial_rep(G)
        cls = regconst_brauer(G, S1, S2, rep, seed=args.seed)
        payload["regulator_constant"] = str(cls.rep)
        lines.append(f"regulator constant ({data.get('rep', 'regular')} module): {cls.rep}")
        lines.append("  rule: quotient of averaged Gram determinants on fixed spaces")
    emit(args, payload, lines)
    return EXIT_OK


def _field_from_scenario(path):
    sc = _load(path)
    f = sc["field"]
    spec = nf.parse_field(f["poly"], index_cofactor=f.get("index_cofactor", 1),
                          asserted_disc=f.get("disc"),
                          asserted_signature=tuple(f["signature"]))
    overrides = {int(p): [tuple(x) for x in v] for p, v in sc.get("zeta_overrides", {}).items()}
    return sc, spec, overrides


def cmd_volume(args):
    sc, spec, overrides = _field_from_scenario(args.scenario)
    vol, err = nf.covolume(spec, prime_bound=args.prime_bound, overrides=overrides)
    emit(args, {"command": "volume", "value": vol, "error": err},
         [f"volume {vol:.7f} (+- {err:.1e})",
          "  rule: discriminant-zeta volume formula for the packaged configuration"])
    return EXIT_OK


def cmd_zeta2(args):
    sc, spec, overrides = _field_from_scenario(args.scenario)
    z = nf.zeta2(spec, prime_bound=args.prime_bound, overrides=overrides)
    emit(args, {"command": "zeta2", "value": z.value, "error": z.error,
                "prime_bound": z.prime_bound},
         [f"zeta_F(2) = {z.value:.10f} (+- {z.error:.1e}) at prime bound {z.prime_bound}"])
    return EXIT_OK


def cmd_sset(args):
    sc = _load(args.scenario)
    block = sc["sset"]
    res = nf.sset_numeric(block["base_coeffs"], block["rel_trace"], block["rel_norm"],
                          block["units"], base_primes=block.get("base_primes", ()))
    payload = {"command": "sset", "finite": res.finite, "primes": res.primes,
               "witness": res.witness, "detail": res.detail}
    lines = [f"prime set: {'finite' if res.finite else 'infinite'}"]
    if res.finite:
        lines.append(f"  primes: {res.primes}")
    else:
        lines.append(f"  witness collection: {res.witness}")
    lines.append(f"  rule: {res.detail}")
    emit(args, payload, lines)
    return EXIT_OK


def cmd_repequiv(args):
    sc = _load(args.scenario)
    verdict, reason = nf.repequiv_criterion(sc["repequiv"])
    emit(args, {"command": "repequiv", "verdict": verdict, "rule": reason},
         [f"verdict: {verdict}", f"  rule: {reason}"])
    return EXIT_OK


def cmd_lattice(args):
    data = _load(args.input)
    M = [[int(x) for x in row] for row in data["matrix"]]
    if args.mode == "lll":
        R = lll_reduce(from_columns(hnf_basis(M), nrows=len(M)))
        emit(args, {"command": "lattice-lll", "reduced": R}, [f"reduced basis: {R}"])
        return EXIT_OK
    lat = IntLattice.span(len(M), columns(M))
    boxes = [set(b) for b in data["boxes"]]
    shift = data.get("shift", [0] * len(M))
    pts = box_points(lat, shift, boxes)
    emit(args, {"command": "lattice-box", "points": [list(p) for p in pts]},
         [f"box points: {pts}"])
    return EXIT_OK


def cmd_verify_example(args):
    report = verify_example(args.example, prime_bound=args.prime_bound)
    payload = report.to_json()
    payload["command"] = "verify-example"
    lines = [f"example {report.example}: {'PASS' if report.passed else 'FAIL'}"]
    for r in report.results:
        status = "ok " if r.passed else "FAIL"
        lines.append(f"  [{status}] {r.check}: {r.rule}")
        if not r.passed:
            lines.append(f"         expected {r.expected!r}, got {r.got!r}")
    emit(args, payload, lines)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_run_suite(args):
    from .verify import EXAMPLE_IDS

    if args.config:
        ids = _load(args.config).get("examples", [])
    elif args.examples:
        ids = args.examples
    else:
        ids = list(EXAMPLE_IDS)
    reports = run_suite(ids, prime_bound=args.prime_bound)
    lines = []
    ok = True
    for r in reports:
        ok = ok and r.passed
        lines.append(f"{r.example:14s} {'PASS' if r.passed else 'FAIL'} "
                     f"({sum(1 for c in r.results if c.passed)}/{len(r.results)} checks)")
    payload = {"command": "run-suite", "passed": ok,
               "reports": [r.to_json() for r in reports]}
    emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_MISMATCH


def build_parser():
    ap = argparse.ArgumentParser(prog="isospec")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--precision", type=str, default="1e-3")
    ap.add_argument("--prime-bound", type=int, default=10 ** 7)
    ap.add_argument("--json", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify")
    p.add_argument("--kind", required=True, choices=["l2", "omega-all", "omega-0", "h-bullet"])
    p.add_argument("--dump", required=True)
    p.add_argument("--scenario")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("certify-noniso")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--dump", required=True)
    p.add_argument("--scenario")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("count")
    p.add_argument("--kind", required=True)
    p.add_argument("--upto", type=float, required=True)
    p.add_argument("--dump", required=True)
    p.add_argument("--scenario")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("regconst")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_regconst)

    p = sub.add_parser("brauer")
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_brauer)

    p = sub.add_parser("volume")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_volume)

    p = sub.add_parser("zeta2")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_zeta2)

    p = sub.add_parser("sset")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_sset)

    p = sub.add_parser("repequiv")
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_repequiv)

    p = sub.add_parser("lattice")
    p.add_argument("mode", choices=["lll", "box"])
    p.add_argument("--input", required=True)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("verify-example")
    p.add_argument("example")
    p.set_defaults(func=cmd_verify_example)

    p = sub.add_parser("run-suite")
    p.add_argument("examples", nargs="*")
    p.add_argument("--config")
    p.set_defaults(func=cmd_run_suite)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (DumpError, ClassifierInputError, ExpectationError, nf.FieldInputError,
            nf.UnsupportedConfigError, ValueError) as e:
        print(f"validation error: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except (PrecisionDemandError, nf.PrecisionError) as e:
        print(f"precision error: {e}", file=sys.stderr)
        return EXIT_PRECISION


if __name__ == "__main__":
    sys.exit(main())
