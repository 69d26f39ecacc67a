"""Command line: export --F <coeffs> --L <rel coeffs> --cond 1 --prec 1e-4 --out file.json"""

from __future__ import annotations

import argparse
import json
import sys

from .backend import CASError, CASUnavailableError, GpBackend, RecordedBackend
from .export import ExportJob, JobError, export_dump
from .validate import ValidationError, validate_dump


def main(argv=None):
    ap = argparse.ArgumentParser(prog="hcg-export")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export")
    p.add_argument("--F", required=True, help="ascending integer coefficients, comma separated")
    p.add_argument("--L", required=True, help="ascending relative coefficients, comma separated")
    p.add_argument("--cond", type=int, default=1)
    p.add_argument("--prec", default="1e-4")
    p.add_argument("--out", required=True)
    p.add_argument("--backend", choices=["gp", "recorded"], default="gp")
    p.add_argument("--recording")
    p.add_argument("--gp-binary", default="gp")

    v = sub.add_parser("validate")
    v.add_argument("file")

    args = ap.parse_args(argv)
    if args.command == "validate":
        with open(args.file) as fh:
            errors = validate_dump(json.load(fh))
        if errors:
            for e in errors:
                print(f"invalid: {e}", file=sys.stderr)
            return 1
        print("valid")
        return 0

    try:
        job = ExportJob(
            tuple(int(x) for x in args.F.split(",")),
            tuple(x.strip() for x in args.L.split(",")),
            conductor_bound=args.cond,
            precision=args.prec,
            out_path=args.out,
        )
        if args.backend == "recorded":
            if not args.recording:
                print("--recording required for the recorded backend", file=sys.stderr)
                return 2
            backend = RecordedBackend(args.recording)
        else:
            backend = GpBackend(args.gp_binary)
        export_dump(job, backend)
    except (JobError, ValidationError) as e:
        print(f"invalid: {e}", file=sys.stderr)
        return 1
    except (CASError, CASUnavailableError) as e:
        print(f"cas error: {e}", file=sys.stderr)
        return 3
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
