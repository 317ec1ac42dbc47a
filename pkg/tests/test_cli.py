import json

import pytest

from szego import cli
from szego.fixtures import fixture_values


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_theta(capsys, frozen):
    code, out, _ = run(["eval", "theta", "--tau", "0,1", "--z", "0,0"], capsys)
    assert code == 0
    val = json.loads(out)
    assert abs(complex(val["re"], val["im"]) - frozen["0.0,1.0/theta_00_at_0"]) < 1e-14
    assert isinstance(val["re"], float)


def test_eval_sphere_szego(capsys):
    code, out, _ = run(["eval", "szego", "--curve", "sphere", "--x", "0,0", "--y", "1,0"], capsys)
    assert code == 0 and json.loads(out) == {"re": 1.0, "im": 0.0}


def test_eval_prime_form_diagonal(capsys):
    code, out, _ = run(["eval", "prime-form", "--curve", "torus", "--tau", "0,1",
                        "--x", "0.2,0", "--y", "0.2,0"], capsys)
    assert code == 0 and json.loads(out) == {"re": 0.0, "im": 0.0}


def test_eval_matrix_and_expansion(capsys):
    code, out, _ = run(["eval", "szego", "--z", "0.1,0.2", "--z=-0.2,0.1",
                        "--x", "0.1,0", "--y", "0.3,0"], capsys)
    assert code == 0 and len(json.loads(out)) == 2
    code, out, _ = run(["eval", "expansion", "--z", "0.37,0.21", "--x", "0.1,0"], capsys)
    data = json.loads(out)
    assert abs(data["c_minus1"]["re"] - 1) < 1e-10


def test_eval_error_exit_codes(capsys):
    code, _, err = run(["eval", "szego", "--z", "0.5,0.5", "--x", "0.1,0", "--y", "0.3,0"], capsys)
    assert code == 3 and json.loads(err)["error"] == "OnThetaDivisor"
    code, _, err = run(["eval", "theta", "--tau", "0,-1", "--z", "0,0"], capsys)
    assert code == 2 and json.loads(err)["error"] == "invalid_spec"
    code, _, err = run(["eval", "theta", "--tau", "abc", "--z", "0,0"], capsys)
    assert code == 2
    code, _, _ = run(["eval", "szego", "--x", "0,0"], capsys)
    assert code == 2


def _spec(tmp_path, data):
    p = tmp_path / "run.json"
    p.write_text(json.dumps(data))
    return p


TORUS = {"kind": "torus", "tau": {"re": 0.0, "im": 1.0}}


def test_verify_pass_and_determinism(tmp_path, capsys):
    spec = _spec(tmp_path, {"curve": TORUS,
                            "suites": [{"name": "composition", "instances": 10},
                                       {"name": "determinant", "instances": 5}],
                            "policy": {"seed": 3}})
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["verify", str(spec), "--output", str(out1)]) == 0
    assert cli.main(["verify", str(spec), "--output", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    reports = json.loads(out1.read_text())
    for r in reports:
        assert {"identity_name", "instances", "max_abs_error", "max_rel_error", "tolerance",
                "passed", "seed", "policy"} <= set(r)
        assert r["policy"]["seed"] == 3


def test_verify_theta_divisor_bundle_fails(tmp_path, capsys):
    spec = _spec(tmp_path, {"curve": TORUS, "bundle": {"z": [{"re": 0.5, "im": 0.5}]},
                            "suites": [{"name": "composition", "instances": 3}]})
    out = tmp_path / "r.json"
    assert cli.main(["verify", str(spec), "--output", str(out)]) == 1
    report = json.loads(out.read_text())[0]
    assert not report["passed"]
    assert all("OnThetaDivisor" in rec["error"] for rec in report["records"])


@pytest.mark.parametrize("data", [
    {"curve": TORUS, "suites": [{"name": "no-such-suite"}]},
    {"curve": {"kind": "torus", "tau": {"re": 0.0, "im": -1.0}}},
    {"curve": {"kind": "klein-bottle"}},
    {"curve": {"kind": "sphere"}, "suites": [{"name": "determinant"}]},
    {"curve": TORUS, "policy": {"bogus": 1}},
])
def test_verify_invalid_spec(tmp_path, capsys, data):
    assert cli.main(["verify", str(_spec(tmp_path, data))]) == 2


def test_verify_bad_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["verify", str(p)]) == 2


def test_sphere_verify(tmp_path, capsys):
    spec = _spec(tmp_path, {"curve": {"kind": "sphere"},
                            "suites": [{"name": "composition", "instances": 5},
                                       {"name": "degenerate", "instances": 5}]})
    assert cli.main(["verify", str(spec)]) == 0


def test_policy_env_file_and_flag_override(tmp_path, capsys, monkeypatch):
    pol = tmp_path / "policy.json"
    pol.write_text(json.dumps({"seed": 17}))
    monkeypatch.setenv("SZEGO_POLICY", str(pol))
    spec = _spec(tmp_path, {"curve": TORUS, "suites": [{"name": "determinant", "instances": 2}]})
    out = tmp_path / "r.json"
    assert cli.main(["verify", str(spec), "--output", str(out)]) == 0
    assert json.loads(out.read_text())[0]["seed"] == 17
    assert cli.main(["verify", str(spec), "--output", str(out), "--seed", "4"]) == 0
    assert json.loads(out.read_text())[0]["seed"] == 4


def test_freeze_fixtures_refreeze(tmp_path, capsys):
    spec = _spec(tmp_path, {"taus": [{"re": 0.0, "im": 1.0}, {"re": 0.5, "im": 1.0}]})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["freeze-fixtures", str(spec), "--output", str(a)]) == 0
    assert cli.main(["freeze-fixtures", str(spec), "--output", str(b), "--radius", "100"]) == 0
    va, vb = (fixture_values(json.loads(p.read_text())) for p in (a, b))
    assert va.keys() == vb.keys()
    assert max(abs(va[k] - vb[k]) for k in va) < 1e-14
    doc = json.loads(a.read_text())
    assert doc["provenance"]["radius"] == 50 and "date" in doc["provenance"]
