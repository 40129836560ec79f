import json

import pytest

from affmonoid.cli import main
from affmonoid.polycore import Ring


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def build(capsys, tmp_path, *argv, name="m.json"):
    code, out, _ = run(capsys, "catalog", "build", *argv)
    assert code == 0
    path = tmp_path / name
    path.write_text(out)
    return path, json.loads(out)


def test_catalog_list(capsys):
    code, out, _ = run(capsys, "catalog", "list")
    assert code == 0
    names = {entry["family"] for entry in json.loads(out)["families"]}
    assert {"rank0", "a3-mbabca", "hirzebruch", "truncated"} <= names


def test_catalog_build_a3(capsys, tmp_path):
    _, data = build(capsys, tmp_path, "a3-mbabca", "--b", "1", "--c", "3")
    R = Ring.blocks(3)
    assert R.parse(data["mu"][2]) == R.parse(
        "x1^3*y3 + 4*x1^2*x2*y2^3 + 6*x1*y1*x2^2*y2^2 + 4*y1^2*x2^3*y2 + y1^3*x3")


def test_catalog_build_constraint_error(capsys):
    code, _, err = run(capsys, "catalog", "build", "corank1", "--b", "2,1")
    assert code == 2 and "b must be sorted" in err


@pytest.mark.parametrize("argv", [
    ["toric", "--n", "3"], ["rank0", "--n", "2"], ["corank1", "--b", "1,2"],
    ["a3-mbaca", "--b", "0", "--c", "2"], ["a3-mmbca", "--b", "1", "--c", "2"],
    ["hirzebruch", "--d", "2", "--non-normalized"], ["bilinear", "--algebra", "kt3"],
    ["truncated", "--n", "3"]])
def test_build_then_verify(capsys, tmp_path, argv):
    path, _ = build(capsys, tmp_path, *argv)
    code, out, _ = run(capsys, "verify", str(path))
    assert code == 0 and json.loads(out)["ok"]


def test_verify_corrupted_reports_witness(capsys, tmp_path):
    path, data = build(capsys, tmp_path, "a3-mbabca", "--b", "1", "--c", "2")
    data["mu"][2] = data["mu"][2] + " + x3*y3"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "verify", str(path))
    report = json.loads(out)
    assert code == 1 and not report["ok"]
    failed = [c for c in report["checks"] if not c["ok"]]
    assert failed and all(c["point"] for c in failed)


def test_verify_empty_file(capsys, tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    code, _, err = run(capsys, "verify", str(path))
    assert code == 2 and "error" in err


def test_verify_missing_and_garbage(capsys, tmp_path):
    assert run(capsys, "verify", str(tmp_path / "nope.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2}')
    assert run(capsys, "verify", str(bad))[0] == 2


def test_unknown_subcommand_is_usage_error(capsys):
    assert run(capsys, "structure", "frobnicate")[0] == 2
    assert run(capsys, "nosuch")[0] == 2


def test_classify_distinguish(capsys):
    code, out, _ = run(capsys, "classify", "distinguish", "--b", "1", "--c", "2")
    data = json.loads(out)
    assert code == 0 and data["verdict"].startswith("non-isomorphic")
    assert data["MbAbcA"]["count"] == 1 and data["MbAcA"]["count"] == 3


def test_classify_wpp(capsys):
    code, out, _ = run(capsys, "classify", "wpp", "--b", "2", "--c", "3")
    data = json.loads(out)
    assert code == 0 and len(data["actions"]) == 2 and data["ok"]


def test_classify_normalize_type2(capsys, tmp_path):
    pair = {"weights": [1, 1, 2], "delta1": {"x2": "x1", "x3": "x1*x2"}, "delta2": {"x3": "x1^2"}}
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(pair))
    code, out, _ = run(capsys, "classify", "normalize", "--pair", str(path))
    data = json.loads(out)
    assert code == 0 and data["type"] == 2
    code, out, _ = run(capsys, "--format", "text", "classify", "normalize", "--pair", str(path))
    assert out.startswith("type 2")


def test_classify_normalize_invalid(capsys, tmp_path):
    path = tmp_path / "pair.json"
    path.write_text(json.dumps({"weights": [1, 1, 2], "delta1": {}, "delta2": {}}))
    code, out, _ = run(capsys, "classify", "normalize", "--pair", str(path))
    assert code == 1 and json.loads(out)["diagnostics"]["kernel_dim"] == 3


def test_classify_verify_action(capsys):
    code, out, _ = run(capsys, "classify", "verify-action", "--family", "hirzebruch", "--d", "2",
                       "--non-normalized")
    assert code == 0 and json.loads(out)["ok"]
    code, _, _ = run(capsys, "classify", "verify-action", "--family", "translation", "--n", "2")
    assert code == 1  # translations do not commute with the scaling


def test_classify_stabilizer(capsys):
    code, out, _ = run(capsys, "--format", "text", "classify", "stabilizer",
                       "--family", "a3-mbaca", "--b", "1", "--c", "2", "--lam", "1", "--lams", "2")
    assert code == 0 and "alpha2 + 2*alpha1 = 0" in out


def test_structure_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "structure", "idempotents", "--family", "hirzebruch", "--d", "1")
    assert code == 0 and json.loads(out)["count"] == 4
    code, out, _ = run(capsys, "--format", "text", "structure", "dichotomy", "--family",
                       "a3-mbaca", "--b", "2", "--c", "3", "--grid", "2")
    assert code == 0 and "holds at 125/125 points" in out
    path, _ = build(capsys, tmp_path, "a3-mbaca", "--b", "1", "--c", "1")
    code, out, _ = run(capsys, "structure", "nilpotent", "--monoid", str(path), "--point", "0,1,1")
    assert code == 0 and json.loads(out)["nilpotent"]
    code, out, _ = run(capsys, "structure", "group-like", "--monoid", str(path), "--point", "0,1,1")
    assert json.loads(out) == {"m": 2, "power": ["0", "0", "0"]}
    code, _, err = run(capsys, "structure", "dichotomy", "--family", "toric", "--n", "2")
    assert code == 2 and "wrong family" in err


def test_global_flags_either_side(capsys, tmp_path):
    out_path = tmp_path / "o.txt"
    a = run(capsys, "--format", "text", "catalog", "build", "toric", "--n", "2")
    b = run(capsys, "catalog", "build", "toric", "--n", "2", "--format", "text")
    assert a == b and a[1].strip()
    assert main(["catalog", "build", "toric", "--n", "2", "--out", str(out_path)]) == 0
    assert json.loads(out_path.read_text())["dim"] == 2


@pytest.mark.parametrize("argv", [
    ["classify", "verify-action", "--family", "wpp", "--b", "1", "--c", "2"],
    ["classify", "normalize", "--pair", "PAIR"],
    ["verify", "MONOID"]])
def test_determinism(capsys, tmp_path, argv):
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({"weights": [1, 1, 2], "delta1": {"x2": "x1"},
                                "delta2": {"x3": "x1^2"}}))
    monoid, _ = build(capsys, tmp_path, "corank1", "--b", "1,2", name="c.json")
    argv = [{"PAIR": str(pair), "MONOID": str(monoid)}.get(a, a) for a in argv]
    first = run(capsys, "--seed", "5", *argv)
    second = run(capsys, "--seed", "5", *argv)
    assert first == second and first[0] == 0
