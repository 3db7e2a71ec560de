import json
import subprocess
import sys
from pathlib import Path

import pytest

from montesinos.cli import RunConfig, main, pi_str

FIX = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_certified(capsys):
    code, out, _ = run(capsys, "classify", "K(1/3,1/4,2/5)")
    row = json.loads(out)
    assert code == 0 and row["verdict"] == "certified" and row["certificate_source"] == "preset"


def test_classify_family(capsys):
    code, out, _ = run(capsys, "classify", "K(1/2,1/5,1/5)")
    assert code == 2 and json.loads(out)["family"] == 4


def test_classify_link(capsys):
    code, out, err = run(capsys, "classify", "K(1/3,1/3,2/7)")
    assert code == 1 and out == "" and "not a knot: 2 components" in err


def test_classify_malformed(capsys):
    code, _, err = run(capsys, "classify", "K(1/3,1/4)")
    assert code == 1 and "error" in err


def test_classify_cross_check(capsys):
    code, out, _ = run(capsys, "classify", "K(1/3,1/3,3/7)", "--cross-check")
    row = json.loads(out)
    assert code == 2 and row["cross_check"]["partial_fractions"] == {"3": "3/7 = 1/(2 + 1/3)"}


def test_classify_table_and_csv(capsys):
    _, out, _ = run(capsys, "classify", "K(1/3,1/3,5/7)", "--format", "table")
    assert "7π/8" in out and "certified" in out
    _, out, _ = run(capsys, "classify", "K(1/2,1/5,1/5)", "--format", "csv")
    assert out.splitlines() == ["knot,verdict,family,certificate_source", '"K(1/2, 1/5, 1/5)",family,4,']


def test_enumerate_csv_header_and_summary(capsys):
    code, out, err = run(capsys, "enumerate", "--q-bound", "5", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "knot,verdict,family,certificate_source"
    assert "anomalies=0" in err


def test_enumerate_json_lines(capsys):
    code, out, _ = run(capsys, "enumerate", "--q-bound", "5", "--format", "json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert lines[-1]["summary"]["anomalies"] == 0
    assert lines[-1]["summary"]["total"] == len(lines) - 1


def test_enumerate_q3(capsys):
    _, out, _ = run(capsys, "enumerate", "--q-bound", "3", "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()[:-1]]
    shapes = {tuple(sorted(q for _, q in r["tangles"])) for r in rows}
    assert shapes <= {(2, 3, 3), (3, 3, 3)}


def test_enumerate_deterministic_across_jobs(capsys):
    _, a, _ = run(capsys, "enumerate", "--q-bound", "5")
    _, b, _ = run(capsys, "enumerate", "--q-bound", "5", "--jobs", "2")
    assert a == b


def test_enumerate_output_file(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "enumerate", "--q-bound", "4", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("knot,verdict,family,certificate_source\n")


def test_enumerate_bad_bound(capsys):
    code, _, err = run(capsys, "enumerate", "--q-bound", "1")
    assert code == 1 and "q-bound" in err


@pytest.mark.parametrize("name, line", [
    ("tetrahedron", "sum_e = 2, chi = 2, equality"),
    ("torus_grid", "sum_e = 0, chi = 0, equality"),
    ("tetrahedron_perturbed", "sum_e = 13/6 > chi = 2, strict"),
])
def test_gb_verify_fixtures(capsys, name, line):
    code, out, _ = run(capsys, "gb-verify", str(FIX / f"{name}.json"))
    assert code == 0 and out.splitlines() == [line]


def test_gb_verify_json(capsys):
    _, out, _ = run(capsys, "gb-verify", str(FIX / "tetrahedron.json"), "--format", "json")
    obj = json.loads(out)
    assert obj["sum_e"] == "2/1" and obj["equality"] and obj["violations"] == []


def test_gb_verify_schema_error(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text('{"surface_euler_char": 2,\n "faces": [}')
    code, _, err = run(capsys, "gb-verify", str(bad))
    assert code == 1 and "line 2" in err
    bad.write_text('{"surface_euler_char": 2, "faces": []}')
    code, _, err = run(capsys, "gb-verify", str(bad))
    assert code == 1 and "vertices" in err


def test_gb_verify_delta_violation(capsys, tmp_path):
    code, out, _ = run(capsys, "gb-verify", str(FIX / "tetrahedron.json"), "--delta", "1")
    assert code == 0
    obj = json.loads((FIX / "tetrahedron.json").read_text())
    obj["vertices"][0]["kind"] = "small"
    obj["vertices"][1]["kind"] = "large"
    tmp = tmp_path / "graph.json"
    tmp.write_text(json.dumps(obj))
    code, out, _ = run(capsys, "gb-verify", str(tmp), "--delta", "1")
    assert code == 4 and "large vertex 1 has valence 3, expected 6" in out


def test_certify(capsys):
    cert = str(FIX / "case1_certificate.json")
    code, out, _ = run(capsys, "certify", "K(1/3,1/4,2/5)", cert)
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = run(capsys, "certify", "K(1/3,1/4,1/5)", cert)
    obj = json.loads(out)
    assert code == 4 and obj["violations"] == [{"condition": "even_face[3]", "slack": "-1/3"}]


def test_presets_table(capsys):
    code, out, _ = run(capsys, "presets")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 9
    assert all(line.endswith("verified=true") for line in lines)
    row = {line.split()[0]: line for line in lines}
    assert "q_i >= 4" in row["sum-A"] and "(2π/3, 2π/3, 2π/3)" in row["sum-A"]
    assert "q = (2, 5, >=9)" in row["case-3b"] and "(π, π/3, 2π/3)" in row["case-3b"]
    assert "q = (2, 3, >=15), |pbar_3| >= 7" in row["case-5"] and "(π, 7π/8, π/8)" in row["case-5"]


def test_presets_json(capsys):
    _, out, _ = run(capsys, "presets", "--format", "json")
    rows = [json.loads(x) for x in out.splitlines()]
    assert [r["regime"] for r in rows][:3] == ["sum-A", "sum-B", "sum-C"]
    assert all(r["verified"] and r["units"] == "pi" for r in rows)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(q_bound=1)
    with pytest.raises(ValueError):
        RunConfig(parallelism=0)
    with pytest.raises(ValueError):
        RunConfig(output_format="xml")


@pytest.mark.parametrize("x, s", [("2/3", "2π/3"), ("1", "π"), ("1/8", "π/8"), ("7/8", "7π/8")])
def test_pi_str(x, s):
    from fractions import Fraction
    assert pi_str(Fraction(x)) == s


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "montesinos", "classify", "K(1/2,1/5,1/5)"], capture_output=True, text=True)
    assert proc.returncode == 2 and json.loads(proc.stdout)["verdict"] == "family"
