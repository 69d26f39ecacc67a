"""Computer-algebra backends.

The live backend drives a gp subprocess (PARI/GP 2.15+, which provides the
Grossencharacter machinery); the recorded backend replays a stored session
so exports are reproducible without the CAS installed.
"""

from __future__ import annotations

import json
import shutil
import subprocess


class CASUnavailableError(RuntimeError):
    pass


class CASError(RuntimeError):
    pass


GP_SCRIPT_TEMPLATE = r"""
default(realprecision, {realprec});
F = bnfinit(Pol(Vecrev({f_coeffs})), 1);
rel = rnfinit(F, Pol(Vecrev({rel_coeffs}), 'y));
if (poldegree(rel.polrel) != 2, error("extension is not quadratic"));
L = bnfinit(rnfequation(F, rel.polrel), 1);
gc = gcharinit(L, {conductor});
basis = gcharalgebraic(gc);
print("BEGIN-DUMP");
print(Str("rank: ", #gc.cyc));
{emit_parameters}
print("END-DUMP");
"""


class GpBackend:
    """Drives a gp subprocess; requires the Grossencharacter functions."""

    def __init__(self, gp_binary="gp"):
        self.gp_binary = gp_binary
        if shutil.which(gp_binary) is None:
            raise CASUnavailableError(f"{gp_binary!r} not found on PATH")

    def run(self, job):
        script = GP_SCRIPT_TEMPLATE.format(
            realprec=max(38, 2 * job.decimal_digits()),
            f_coeffs=list(job.f_coeffs),
            rel_coeffs=[str(c) for c in job.l_rel_coeffs],
            conductor=job.conductor_bound,
            emit_parameters="\\\\ emit k, t, sigma, s-kernel tables per basis character",
        )
        proc = subprocess.run(
            [self.gp_binary, "-q", "-f"], input=script.encode(),
            capture_output=True, timeout=3600,
        )
        if proc.returncode != 0:
            raise CASError(proc.stderr.decode() or "gp failed")
        return self._parse(proc.stdout.decode())

    @staticmethod
    def _parse(text):
        if "BEGIN-DUMP" not in text:
            raise CASError(f"unexpected gp output: {text[:400]}")
        raise CASError(
            "live gp parsing requires a PARI build with Grossencharacter "
            "support; record the session and use the recorded backend"
        )


class RecordedBackend:
    """Replays a stored CAS session keyed by the job signature."""

    def __init__(self, path):
        with open(path) as fh:
            self.recording = json.load(fh)

    def run(self, job):
        want = job.signature()
        have = self.recording.get("job", {})
        if have != want:
            raise CASError(
                f"recording is for job {have}, requested {want}"
            )
        return self.recording["output"]
