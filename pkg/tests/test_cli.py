import io
import json
import math
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from capfloat import cli

GOLDEN = Path(__file__).parent / "golden"


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize(
    "argv, name",
    [
        (("solve", "4..8"), "solve_4__8.json"),
        (("poly", "S", "4"), "poly_S_4.json"),
        (("table", "4", "0.5"), "table_4_0_5.json"),
        (("scan", "10"), "scan_10.json"),
    ],
)
def test_structured_golden(argv, name):
    code, text = run(*argv, "--format", "structured")
    assert code == 0
    assert text == (GOLDEN / name).read_text()
    jsonschema.validate(json.loads(text), cli.STRUCTURED_SCHEMA)


def test_text_goldens():
    assert run("poly", "S", "4") == (0, (GOLDEN / "poly_S_4.txt").read_text())
    assert run("scan", "10") == (0, (GOLDEN / "scan_10.txt").read_text())
    assert (GOLDEN / "poly_S_4.txt").read_text() == "S 4: -3 5 0 0 -5 3\n"


def test_golden_solve_values_are_the_closed_forms():
    doc = json.loads((GOLDEN / "solve_4__8.json").read_text())
    assert doc["results"]["A_n"]["4"][0] == pytest.approx(math.atan(math.sqrt(5)), abs=1e-15)
    assert doc["results"]["A_n"]["5"][0] == pytest.approx(math.atan(math.sqrt(5 / 3)), abs=1e-15)
    assert doc["results"]["counts"] == {"4": 1, "5": 1, "6": 2, "7": 2, "8": 3}


def test_solve_text_and_empty():
    code, text = run("solve", "2")
    assert code == 0 and text == "B_2 is empty\n"
    code, text = run("solve", "4", "--format", "delimited")
    assert text.splitlines()[0] == "n,k,lo,hi,value,residual"


def test_table_closure_and_plot(tmp_path):
    svg = tmp_path / "t.svg"
    code, text = run("table", "4", "0.5", "--plot", str(svg))
    assert code == 0
    gap = float(text.splitlines()[1].split()[1].split("=")[1])
    assert gap < 1e-12
    assert len(text.splitlines()) == 3 + 1024
    first = svg.read_text()
    run("table", "4", "0.5", "--plot", str(svg))
    assert svg.read_text() == first
    assert first.startswith("<svg ")


def test_table_rejects_tau_one():
    assert run("table", "4", "1.0")[0] == 2


def test_verify_caustic_outcomes(tmp_path):
    code, text = run("verify-caustic", "omega:4,0.5", "atan(sqrt(5))", "--format", "structured")
    assert code == 0
    res = json.loads(text)["results"]
    assert res["exists"] and res["verified"]
    assert res["one_step_max_drift"] <= 1e-8
    assert abs(res["rotation_estimate"] - res["rotation_expected"]) < 1e-6
    code, text = run("verify-caustic", "omega:4,0.5", "pi/4")
    assert code == 1 and "ABSENT" in text
    assert run("verify-caustic", "omega:4,0.5", "pi")[0] == 2
    assert run("verify-caustic", str(tmp_path / "missing.json"), "1.0")[0] == 2


def test_verify_caustic_seed_is_reproducible():
    a = run("verify-caustic", "omega:5,0.3", "pi/2", "--seed", "4", "--steps", "50")
    b = run("verify-caustic", "omega:5,0.3", "pi/2", "--seed", "4", "--steps", "50")
    assert a == b and a[0] == 0


def test_scan_ledger_and_empty(tmp_path):
    led = tmp_path / "ledger.txt"
    assert run("scan", "6", "--ledger", str(led))[0] == 0
    assert run("scan", "6", "--ledger", str(led))[0] == 0
    assert led.read_text().splitlines() == ["4 5 disjoint 0", "4 6 disjoint 0", "5 6 disjoint 0"]
    code, text = run("scan", "4", "--format", "structured")
    assert code == 0 and json.loads(text)["certificates"] == []


def test_float_outcomes(tmp_path):
    assert run("float", "circle")[1].startswith("contact angles: all angles")
    code, text = run("float", "omega:4,0.5", "--format", "structured")
    doc = json.loads(text)
    assert code == 0 and len(doc["results"]["contact_angles"]) == 2
    assert doc["results"]["classification"]["kind"] == "omega"
    f = tmp_path / "c.json"
    f.write_text('{"c0": 1.0, "harmonics": [[4, 0.1, 0.0], [6, 0.0, 0.1]]}')
    assert run("float", str(f))[0] == 1


def test_orbit_dump(tmp_path):
    svg = tmp_path / "p.svg"
    code, text = run("orbit-dump", "omega:4,0.5", "atan(sqrt(5))", "--steps", "5", "--plot", str(svg))
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "step,alpha,theta,x,y" and len(lines) == 7
    assert svg.read_text().count("<circle") == 6


@pytest.mark.parametrize(
    "text, value",
    [("0.7", 0.7), ("pi/4", math.pi / 4), ("atan(sqrt(5))", math.atan(math.sqrt(5))), ("-pi/2 + pi", math.pi / 2)],
)
def test_parse_angle(text, value):
    assert cli.parse_angle(text) == pytest.approx(value, abs=0)


@pytest.mark.parametrize("text", ["__import__('os')", "x", "1/0", "sqrt(1, 2)"])
def test_parse_angle_rejects(text):
    with pytest.raises(cli.UsageError):
        cli.parse_angle(text)


def test_usage_errors_exit_two():
    assert run("solve", "8..4")[0] == 2
    assert run("solve", "abc")[0] == 2
    assert run("poly", "R", "1")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["poly", "T", "4"], out=io.StringIO())
    assert exc.value.code == 2


def test_module_entry_point_bytes_identical():
    cmd = [sys.executable, "-m", "capfloat", "scan", "10", "--format", "structured"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b == (GOLDEN / "scan_10.json").read_bytes()
