#!/usr/bin/env python3
"""Freeze recorded CAS sessions for the exporter from the packaged dumps.

Each recording pairs an export-job signature with the session output the
backend would produce for it; replaying the recording through the exporter
reproduces the packaged dump byte for byte.
"""

import json
import os

HERE = os.path.dirname(__file__)
FIXTURES = os.path.join(HERE, "..", "src", "isospec", "fixtures")
OUT = os.path.join(HERE, "..", "exporter", "src", "hcg_export", "recordings")

JOBS = {
    "small-iso": {
        "f_coeffs": [-4, 4, 1, -1, 1],
        # z^2 - t z + 1 with t = -1/2 + a/4 - a^2/4 - a^3/4
        "l_rel_coeffs": ["1", "1/2-1/4*a+1/4*a^2+1/4*a^3", "1"],
        "conductor_bound": 1,
    },
    "zero-not-one": {
        "f_coeffs": [1, -2, -3, 0, 1],
        "l_rel_coeffs": ["1", "0", "1"],
        "conductor_bound": 1,
    },
}


def main():
    os.makedirs(OUT, exist_ok=True)
    for name, sig in JOBS.items():
        with open(os.path.join(FIXTURES, f"{name}.hcg.json")) as fh:
            dump = json.load(fh)
        recording = {"job": sig, "output": dump}
        path = os.path.join(OUT, f"{name}.rec.json")
        with open(path, "w") as fh:
            json.dump(recording, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
