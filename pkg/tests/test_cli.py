import json
from pathlib import Path

import pytest

from s3circles.cli import main

GOLDEN = Path(__file__).parent / "golden" / "verify_schema.json"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def full_report(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify") / "report.json"
    code = main(["verify", "--out", str(out)])
    return code, json.loads(out.read_text())


def test_classify_normal_forms(capsys):
    for right, expected in (("B1", "I"), ("B2", "II"), ("B3", "III")):
        code, out, _ = run(capsys, "classify", "--left", "A0", "--right", right)
        assert code == 0 and json.loads(out)["type"] == expected


def test_classify_json_circle_spec(tmp_path, capsys):
    code, out, _ = run(capsys, "classify", "--left", "A0", "--right", "B1")
    spec = tmp_path / "b1.json"
    from s3circles.circles import named_circle

    spec.write_text(json.dumps(named_circle("B1").to_json()))
    code2, out2, _ = run(capsys, "classify", "--left", "A0", "--right", "@" + str(spec))
    assert code == code2 == 0 and json.loads(out)["type"] == json.loads(out2)["type"]


def test_classify_refusals_are_usage_errors(capsys):
    assert run(capsys, "classify", "--left", "A0", "--right", "C")[0] == 2
    assert run(capsys, "classify", "--left", "B1", "--right", "B2")[0] == 2
    assert run(capsys, "classify", "--left", "A0", "--right", "nonsense")[0] == 2
    assert run(capsys, "classify", "--left", "A0")[0] == 2


def test_unknown_subcommand_and_flags(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "mesh", "--left", "A0", "--right", "B1", "--format", "stl")[0] == 2


def test_mesh_formats(tmp_path, capsys):
    for fmt in ("obj", "ply", "json"):
        out = tmp_path / f"m.{fmt}"
        code, _, _ = run(capsys, "mesh", "--left", "A0", "--right", "B1", "--nu", "16", "--nv", "12",
                         "--out", str(out))
        assert code == 0
        text = out.read_text()
        if fmt == "obj":
            assert sum(line.startswith("v ") for line in text.splitlines()) == 192
        elif fmt == "ply":
            assert text.startswith("ply") and "element face 192" in text
        else:
            assert len(json.loads(text)["vertices"]) == 192


def test_mesh_is_deterministic(capsys):
    args = ("mesh", "--left", "A0", "--right", "B3", "--nu", "16", "--nv", "16", "--format", "obj")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


def test_mesh_bad_resolution_and_center(capsys):
    assert run(capsys, "mesh", "--left", "A0", "--right", "B1", "--nu", "4")[0] == 2
    assert run(capsys, "mesh", "--left", "A0", "--right", "C", "--nu", "16", "--nv", "16")[0] == 2
    assert run(capsys, "mesh", "--left", "A0", "--right", "B1", "--project", "stereo:1,1,1,1")[0] == 2


def test_implicitize_central_quartic(capsys):
    code, out, _ = run(capsys, "implicitize", "--left", "A0", "--right", "B3", "--project", "central",
                       "--dmax", "5")
    js = json.loads(out)
    assert code == 0 and js["degree"] == 4 and js["kernel_dim"] == 1 and js["poly"]["vars"] == 4


def test_implicitize_failure_exit_code(capsys):
    code, _, err = run(capsys, "implicitize", "--left", "A0", "--right", "B1", "--dmax", "3")
    assert code == 1 and "certification failed" in err


def test_implicitize_seed_is_deterministic(capsys):
    args = ("implicitize", "--left", "A0", "--right", "B2", "--project", "central", "--dmax", "4")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]
    assert json.loads(run(capsys, *args, "--seed", "9")[1])["poly"] == json.loads(run(capsys, *args)[1])["poly"]


def test_lattice(capsys):
    code, out, _ = run(capsys, "lattice")
    assert code == 0
    assert "8 = 2 + 2 + 2 + 1 + 1" in out and "3 = 1 + 1 + 1" in out and "FAIL" not in out


def test_project(capsys):
    assert json.loads(run(capsys, "project", "0,1,0,0")[1]) == ["0", "1", "0"]
    assert json.loads(run(capsys, "project", "--inverse", "1/2,0,0")[1]) == ["4/5", "0", "0", "-3/5"]
    assert run(capsys, "project", "0,0,0,1")[0] == 2
    assert run(capsys, "project", "1,2")[0] == 2


def test_config_and_override(tmp_path, capsys):
    cfg = tmp_path / "s3.cfg"
    cfg.write_text("# defaults\nnu = 8\nnv = 8\nformat = json\n", encoding="utf-8")
    code, out, _ = run(capsys, "mesh", "--config", str(cfg), "--left", "A0", "--right", "B1")
    assert code == 0 and len(json.loads(out)["vertices"]) == 64
    code, out, _ = run(capsys, "mesh", "--config", str(cfg), "--left", "A0", "--right", "B1", "--nu", "10")
    assert code == 0 and len(json.loads(out)["vertices"]) == 80


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    assert run(capsys, "lattice", "--config", str(cfg))[0] == 2
    assert run(capsys, "lattice", "--config", str(tmp_path / "missing.cfg"))[0] == 2


def test_verify_skip_exact_is_partial(capsys):
    code, out, _ = run(capsys, "verify", "--skip", "exact")
    report = json.loads(out)
    assert code == 0 and report["partial"] and report["skipped"] == ["exact"]
    assert {c["kind"] for c in report["checks"]} == {"float"}


def test_verify_fault_injection(capsys):
    code, out, _ = run(capsys, "verify", "--skip", "float", "--inject-fault", "B1")
    report = json.loads(out)
    assert code == 1 and not report["passed"]
    failed = {(c["module"], c["op"], c["name"]) for c in report["checks"] if not c["pass"]}
    assert ("circles", "on_sphere_certificate", "B1") in failed


def test_verify_rejects_unknown_preset(capsys):
    assert run(capsys, "verify", "--inject-fault", "B9", "--skip", "float")[0] == 2


def test_verify_full_run(full_report):
    code, report = full_report
    assert code == 0 and report["passed"] and not report["partial"]


def test_verify_schema_is_stable(full_report):
    _, report = full_report
    schema = [[c["module"], c["op"], c["name"], c["kind"]] for c in report["checks"]]
    assert schema == json.loads(GOLDEN.read_text())
    assert all(set(c) == {"module", "op", "name", "kind", "pass", "detail"} for c in report["checks"])
