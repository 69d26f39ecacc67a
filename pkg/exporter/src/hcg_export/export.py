"""Export jobs: drive a backend, normalize its output, validate, write."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from .validate import ValidationError, validate_dump


class JobError(ValueError):
    pass


@dataclass(frozen=True)
class ExportJob:
    f_coeffs: tuple          # ascending monic integer coefficients of the base field
    l_rel_coeffs: tuple      # ascending coefficients (over the base) of the relative polynomial
    conductor_bound: int = 1
    precision: str = "1e-4"
    out_path: str = "dump.json"

    def __post_init__(self):
        if self.f_coeffs[-1] != 1:
            raise JobError("base polynomial must be monic")
        if len(self.l_rel_coeffs) != 3:
            raise JobError("the extension must be quadratic over the base")
        if Fraction(self.precision) > Fraction(1, 1000):
            raise JobError("precision must be at least 1e-3")

    def decimal_digits(self):
        p = Fraction(self.precision)
        return max(4, int(-math.log10(float(p))) + 2)

    def signature(self):
        return {
            "f_coeffs": list(self.f_coeffs),
            "l_rel_coeffs": [str(c) for c in self.l_rel_coeffs],
            "conductor_bound": self.conductor_bound,
        }


def normalize(raw, job: ExportJob):
    """Deterministic assembly of the hcg-1 document from backend output.

    The backend supplies places, basis tables, the Galois matrix, and the
    s-kernel; normalization fixes the embedding representatives (lexicographic
    root position, positive imaginary part -- the backend emits labels in that
    order), field ordering, and decimal formatting.
    """
    doc = {
        "schema": "hcg-1",
        "name": raw.get("name", ""),
        "field_F": raw["field_F"],
        "field_L": raw["field_L"],
        "places": raw["places"],
        "rank": raw["rank"],
        "torsion": raw.get("torsion", []),
        "basis": [
            {
                "name": b["name"],
                "k": {lbl: int(v) for lbl, v in sorted(b["k"].items())},
                "t": {
                    lbl: {"value": str(v["value"]), "err": str(v["err"])}
                    for lbl, v in sorted(b["t"].items())
                },
                "conductor_norm": str(b.get("conductor_norm", "1")),
            }
            for b in raw["basis"]
        ],
        "sigma_matrix": [[int(v) for v in row] for row in raw["sigma_matrix"]],
        "s_kernel": [[int(v) for v in col] for col in raw["s_kernel"]],
        "conductor_bound_norm": str(raw.get("conductor_bound_norm", job.conductor_bound)),
        "precision": raw.get("precision", job.precision),
    }
    return doc


def render(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def export_dump(job: ExportJob, backend):
    """Run the job and write a validated hcg-1 dump; returns the document."""
    raw = backend.run(job)
    doc = normalize(raw, job)
    errors = validate_dump(doc)
    if errors:
        raise ValidationError("; ".join(errors))
    payload = render(doc)
    if job.out_path:
        with open(job.out_path, "w") as fh:
            fh.write(payload)
    return doc
