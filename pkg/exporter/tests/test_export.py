import copy
import json
import os
import shutil

import pytest

from hcg_export.backend import CASError, CASUnavailableError, GpBackend, RecordedBackend
from hcg_export.export import ExportJob, JobError, export_dump, normalize, render
from hcg_export.validate import validate_dump

HERE = os.path.dirname(__file__)
RECORDINGS = os.path.join(HERE, "..", "src", "hcg_export", "recordings")
PRIMARY_FIXTURES = os.path.join(HERE, "..", "..", "src", "isospec", "fixtures")

JOBS = {
    "small-iso": ExportJob(
        (-4, 4, 1, -1, 1),
        ("1", "1/2-1/4*a+1/4*a^2+1/4*a^3", "1"),
        conductor_bound=1, precision="1e-4", out_path="",
    ),
    "zero-not-one": ExportJob(
        (1, -2, -3, 0, 1), ("1", "0", "1"),
        conductor_bound=1, precision="1e-4", out_path="",
    ),
}

# printed parameter tables for the two regenerated examples: (k, t) per
# embedding class per basis character
PRINTED_T = {
    "zero-not-one": {
        "tau1": ["0", "-0.651", "0.550", "-0.453", "0.531", "-1.266", "1.114"],
        "tau2": ["0", "-0.651", "1.266", "-0.453", "-1.634", "-0.550", "-2.218"],
        "tau3": ["0", "0.737", "-0.568", "-1.120", "-0.191", "0.568", "-0.191"],
        "tau4": ["0", "0.564", "-1.248", "2.026", "1.295", "1.248", "1.295"],
    },
    "small-iso": {
        "tau1": ["0", "0", "0", "-0.898", "-0.367", "-0.367", "1.149"],
        "tau2": ["0", "0", "0", "0.898", "-1.265", "-1.265", "-1.149"],
        "tau3": ["0", "0", "-0.611", "0", "-0.015", "1.647", "-0.525"],
        "tau4": ["0", "0", "0.611", "0", "1.647", "-0.015", "0.525"],
    },
}
PRINTED_K = {
    "zero-not-one": {
        "tau1": [4, -23, -31, 2, -31, -6, 19],
        "tau2": [-4, 21, 30, -2, 30, 7, -20],
        "tau3": [4, -22, -31, 2, -32, -7, 21],
        "tau4": [4, -22, -32, 2, -31, -8, 20],
    },
    "small-iso": {
        "tau1": [2, -2, 0, -3, 1, 1, -2],
        "tau2": [-2, 2, 2, 3, -2, 0, 0],
        "tau3": [4, -9, -2, -10, 5, 3, -1],
        "tau4": [-4, 9, 2, 12, -6, -4, 3],
    },
}


def recorded(name):
    return RecordedBackend(os.path.join(RECORDINGS, f"{name}.rec.json"))


@pytest.mark.parametrize("name", ["small-iso", "zero-not-one"])
def test_regenerates_fixture_bit_for_bit(name, tmp_path):
    job = JOBS[name]
    out = tmp_path / f"{name}.json"
    job = ExportJob(job.f_coeffs, job.l_rel_coeffs, job.conductor_bound,
                    job.precision, str(out))
    export_dump(job, recorded(name))
    with open(out, "rb") as fh:
        got = fh.read()
    with open(os.path.join(PRIMARY_FIXTURES, f"{name}.hcg.json"), "rb") as fh:
        want = fh.read()
    assert got == want


@pytest.mark.parametrize("name", ["small-iso", "zero-not-one"])
def test_reexport_idempotent(name, tmp_path):
    job = JOBS[name]
    docs = []
    for i in range(2):
        j = ExportJob(job.f_coeffs, job.l_rel_coeffs, job.conductor_bound,
                      job.precision, str(tmp_path / f"{name}.{i}.json"))
        docs.append(render(export_dump(j, recorded(name))))
    assert docs[0] == docs[1]


@pytest.mark.parametrize("name", ["small-iso", "zero-not-one"])
def test_exact_parts_and_printed_tables(name):
    doc = export_dump(JOBS[name], recorded(name))
    for j, b in enumerate(doc["basis"]):
        for lbl, col in PRINTED_K[name].items():
            assert b["k"][lbl] == col[j]
        for lbl, col in PRINTED_T[name].items():
            assert abs(float(b["t"][lbl]["value"]) - float(col[j])) <= 1e-3


@pytest.mark.parametrize("name", ["small-iso", "zero-not-one"])
def test_roundtrip_validates(name):
    doc = export_dump(JOBS[name], recorded(name))
    assert validate_dump(doc) == []


def test_validate_rejects_negated_k():
    doc = export_dump(JOBS["zero-not-one"], recorded("zero-not-one"))
    bad = copy.deepcopy(doc)
    bad["basis"][0]["k"]["tau1"] = -bad["basis"][0]["k"]["tau1"]
    errors = validate_dump(bad)
    assert any("k table" in e for e in errors)


def test_validate_rejects_coarse_precision():
    doc = export_dump(JOBS["zero-not-one"], recorded("zero-not-one"))
    bad = copy.deepcopy(doc)
    bad["precision"] = "1e-2"
    errors = validate_dump(bad)
    assert any("precision" in e for e in errors)


def test_validate_rejects_broken_involution():
    doc = export_dump(JOBS["zero-not-one"], recorded("zero-not-one"))
    bad = copy.deepcopy(doc)
    bad["sigma_matrix"][0][0] += 1
    errors = validate_dump(bad)
    assert errors


def test_job_rejects_non_quadratic_extension():
    with pytest.raises(JobError):
        ExportJob((-4, 4, 1, -1, 1), ("1", "0", "0", "1"), 1, "1e-4", "")


def test_job_rejects_coarse_precision():
    with pytest.raises(JobError):
        ExportJob((1, -2, -3, 0, 1), ("1", "0", "1"), 1, "1e-2", "")


def test_recording_job_signature_checked(tmp_path):
    job = ExportJob((1, -2, -3, 0, 1), ("1", "1", "1"), 1, "1e-4", "")
    with pytest.raises(CASError):
        export_dump(job, recorded("zero-not-one"))


def test_gp_backend_absent_is_clean():
    if shutil.which("gp") is None:
        with pytest.raises(CASUnavailableError):
            GpBackend()
    else:
        pytest.skip("gp present; live-backend parsing is exercised elsewhere")
