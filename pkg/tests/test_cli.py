import json
import io
import contextlib

import pytest

from isospec.cli import main
from isospec.verify import fixture_path


def run_cli(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


def fixture(name):
    return str(fixture_path(name))


def test_classify_command():
    code, out = run_cli([
        "classify", "--kind", "omega-all",
        "--dump", fixture("zero-not-one.hcg.json"),
        "--scenario", fixture("zero-not-one.scenario.json"),
    ])
    assert code == 0
    assert "exists" in out


def test_classify_json_byte_stable():
    argv = ["--json", "classify", "--kind", "omega-0",
            "--dump", fixture("zero-not-one.hcg.json")]
    code1, out1 = run_cli(argv)
    code2, out2 = run_cli(argv)
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["exists"] is False


def test_certify_command():
    code, out = run_cli([
        "certify-noniso", "--degree", "1",
        "--dump", fixture("zero-not-one.hcg.json"),
    ])
    assert code == 0 and "not-1-isospectral" in out


def test_count_command():
    code, out = run_cli([
        "count", "--kind", "omega-all", "--upto", "300",
        "--dump", fixture("zero-not-one.hcg.json"),
    ])
    assert code == 0 and out.startswith("4 ")


def test_volume_command():
    code, out = run_cli([
        "--prime-bound", "100000",
        "volume", "--scenario", fixture("zero-not-one.scenario.json"),
    ])
    assert code == 0 and "0.246" in out


def test_sset_command():
    code, out = run_cli(["sset", "--scenario", fixture("zero-betti.scenario.json")])
    assert code == 0 and "infinite" in out


def test_repequiv_command():
    code, out = run_cli(["repequiv", "--scenario", fixture("lv.scenario.json")])
    assert code == 0 and "representation-equivalent" in out


def test_lattice_commands(tmp_path):
    box_input = tmp_path / "box.json"
    box_input.write_text(json.dumps({
        "matrix": [[4, -37, 50, 9], [4, -38, 53, 9], [4, -40, 51, 9]],
        "boxes": [[-1, 1], [-1, 1], [-1, 1]],
    }))
    code, out = run_cli(["lattice", "box", "--input", str(box_input)])
    assert code == 0 and "(1, 1, 1)" in out
    code, out = run_cli(["lattice", "lll", "--input", str(box_input)])
    assert code == 0


def test_regconst_command(tmp_path):
    spec = tmp_path / "spec.json"
    spec.write_text(json.dumps({
        "invariant_factors": [2],
        "dims": {"0": 1, "1": 1},
        "generators": [{"degree": [1], "matrix": [["0", "2"], ["1", "0"]],
                        "iota_partner": 0}],
        "pair": [[0], [1]],
        "ring": "Q",
    }))
    code, out = run_cli(["regconst", "--spec", str(spec)])
    assert code == 0 and "2" in out


def test_brauer_command(tmp_path):
    from isospec.groups import klein_four_group

    G = klein_four_group()
    subs = [s.elements for s in G.all_subgroups() if len(s) == 2]
    doc = tmp_path / "brauer.json"
    doc.write_text(json.dumps({
        "mul_table": G.mul,
        "S1": [[0], list(range(4)), list(range(4))],
        "S2": subs,
        "rep": "trivial",
    }))
    code, out = run_cli(["brauer", "--input", str(doc)])
    assert code == 0 and "relation: yes" in out and "2" in out


def test_verify_example_command():
    code, out = run_cli(["--prime-bound", "100000", "verify-example", "zero-betti"])
    assert code == 0 and "PASS" in out


def test_verify_example_unknown_id():
    code, _ = run_cli(["verify-example", "unknown"])
    assert code == 3


def test_bad_dump_validation_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema": "hcg-0"}))
    code, _ = run_cli(["classify", "--kind", "omega-all", "--dump", str(bad)])
    assert code == 3


def test_run_suite_empty_config(tmp_path):
    cfg = tmp_path / "config.json"
    cfg.write_text(json.dumps({"examples": []}))
    code, out = run_cli(["run-suite", "--config", str(cfg)])
    assert code == 0


def test_zeta2_command():
    code, out = run_cli([
        "--prime-bound", "10000",
        "zeta2", "--scenario", fixture("zero-not-one.scenario.json"),
    ])
    assert code == 0 and "zeta_F(2)" in out
