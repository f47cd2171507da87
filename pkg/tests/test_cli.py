import io
import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from orbitbound.cli import run

INVOLUTION = json.dumps({"n": 1, "maps": [{"name": "f", "coords": ["36 - x1"]}]})
SHIFT = json.dumps({"n": 1, "maps": [["x1 + 1"]]})


def schema(cmd):
    text = resources.files("orbitbound").joinpath("schemas", f"{cmd}.json").read_text()
    return json.loads(text)


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    report = json.loads(buf.getvalue())
    cmd = report["schema"].split("/")[1]
    jsonschema.validate(report, schema(cmd))
    return code, report


def test_decide_periodic():
    code, r = call("decide", "--system", INVOLUTION, "--point", "[0]")
    assert code == 0 and r["verdict"] == "periodic" and r["orbit"] == [["0"], ["36"]]
    assert r["permutations"]["f"] == {"images": [1, 0], "cycles": "(0 1)"}
    assert r["bound"]["label"] == "C(n)"


def test_decide_undecided():
    code, r = call("decide", "--system", SHIFT, "--point", "[0]", "--budget", "1000")
    assert code == 0 and r["verdict"] == "undecided"


def test_decide_override_and_collision():
    code, r = call("decide", "--system", SHIFT, "--point", "[0]", "--bound-override", "50")
    assert r["reason"] == "exceeded_proven_bound" and r["bound"]["label"] == "override"
    sq = json.dumps({"n": 1, "maps": [["x1^2"]]})
    code, r = call("decide", "--system", sq, "--point", "[-1]")
    assert r["reason"] == "finite_not_permuted"
    assert r["witness"]["collision"] == [["-1"], ["1"]]


def test_system_from_file(tmp_path):
    path = tmp_path / "sys.json"
    path.write_text(INVOLUTION)
    code, r = call("decide", "--system", str(path), "--point", "[36]")
    assert code == 0 and r["verdict"] == "periodic"


@pytest.mark.parametrize("argv", [
    ["decide", "--system", json.dumps({"n": 1, "maps": [["x1 +"]]}), "--point", "[0]"],
    ["decide", "--system", INVOLUTION, "--point", "[0, 1]"],
    ["decide", "--system", "/nonexistent.json", "--point", "[0]"],
    ["decide", "--system", INVOLUTION, "--point", "[0]", "--budget", "abc"],
    ["bound", "--n", "1", "--primes", "4,5"],
    ["aut", "--points", "[[0],[0]]"],
    ["interpolate", "--cycle", "1,1"],
    ["jets", "--system", INVOLUTION, "--point", "[0]", "--prime", "4"],
])
def test_input_errors_exit_2(argv):
    code, r = call(*argv)
    assert code == 2 and r["error"]


def test_argparse_error_exit_2():
    assert run(["decide"], io.StringIO()) == 2


def test_bound_exact():
    code, r = call("bound", "--n", "1", "--exact")
    assert code == 0 and r["label"] == "C(n)" and r["primes"] == [2, 3]
    assert len(r["exact"]) == 530083
    assert int(r["exact"][:20]) > 0
    assert r["log2"][:10] == r["exact_log2"][:10]


def test_bound_n2_note_and_derived_label():
    _, r = call("bound", "--n", "2", "--exact")
    assert r["exact"] is None and "infeasible" in r["note"]
    _, r = call("bound", "--n", "1", "--primes", "5,7")
    assert r["label"] == "derived bound"


def test_aut_report():
    _, r = call("aut", "--points", '[["0"], ["36"]]')
    assert r["order"] == "2" and r["generators"] == ["(0 1)"]
    assert r["gamma"]["2"]["elements"] == ["()", "(0 1)"]
    assert r["gamma"]["3"]["elements"] == ["()"]
    assert r["injective"] is True


def test_jets_report():
    sys_ = json.dumps({"n": 1, "maps": [{"name": "neg", "coords": ["-x1"]}]})
    _, r = call("jets", "--system", sys_, "--point", "[5]", "--prime", "3")
    assert r["maps"]["neg"] == {"base": ["4"], "jacobian": [[2]]}


def test_interpolate_report():
    _, r = call("interpolate", "--cycle", "0,1,2")
    assert r["coefficients"] == ["-3/2", "5/2", "1"] and r["integral"] is False
    assert r["mod2_obstruction"] is True


def test_orbit_report():
    _, r = call("orbit", "--system", SHIFT, "--point", "[0]", "--budget", "5")
    assert r["stabilized"] is False and r["size"] == "6"


def test_selftest_quick():
    code, r = call("selftest", "--quick")
    assert code == 0 and r["passed"]
    assert len(r["suites"]) == 8


def strip_seconds(text):
    data = json.loads(text)
    data.pop("seconds", None)
    return json.dumps(data, sort_keys=True)


def test_output_deterministic_and_round_trips():
    argv = ["aut", "--points", "[[0,0],[2,4],[4,8],[6,0]]"]
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run(argv, buf)
        outs.append(strip_seconds(buf.getvalue()))
    assert outs[0] == outs[1]
    assert json.dumps(json.loads(outs[0]), sort_keys=True) == outs[0]


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "orbitbound", "interpolate", "--cycle", "0,1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["integral"] is True
