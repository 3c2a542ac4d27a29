import json
import subprocess
import sys
from fractions import Fraction

import pytest

from runlengths import catalog
from runlengths.cli import jsonable, main
from runlengths.measure import Atom, TotalLeaf, serialize_measure_spec

F = Fraction


@pytest.fixture
def spec(tmp_path):
    def write(expr, name="m.json"):
        path = tmp_path / name
        path.write_text(serialize_measure_spec(expr))
        return str(path)
    return write


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def frac(d):
    return F(d["num"], d["den"]) if isinstance(d, dict) else d


def test_stats_die6_interior_strict(spec, capsys):
    code, out, _ = run(["stats", spec(catalog.die(6)), "--kind", "strict", "--position", "interior"], capsys)
    assert code == 0
    rep = json.loads(out)
    block = rep["results"]["strict.interior"]
    assert frac(block["mean"]) == F(12, 7)
    assert frac(block["pmf"][1]) == F(4, 9)
    assert rep["measure"]["atom_count"] == 6 and rep["measure"]["degenerate"] is False


def test_stats_dart_float_mean(spec, capsys):
    code, out, _ = run(["stats", spec(catalog.dart(F(1, 2))), "--kind", "strict", "--position", "interior"], capsys)
    assert code == 0
    block = json.loads(out)["results"]["strict.interior"]
    assert frac(block["mean"]) == F(8, 5)
    assert block["mode"] == "float"


def test_stats_degenerate_nonstrict_exit3(spec, capsys):
    code, out, err = run(["stats", spec(catalog.singleton()), "--kind", "nonstrict"], capsys)
    assert code == 3 and out == "" and "degenerate" in err


def test_coeffs_examples(spec, capsys):
    code, out, _ = run(["coeffs", spec(catalog.two_atom(F(1, 3))), "--kind", "strict", "--order", "5"], capsys)
    assert [frac(x) for x in json.loads(out)["results"]["strict"]["coefficients"]] == [1, 1, F(2, 9), 0, 0, 0]
    code, out, _ = run(["coeffs", spec(catalog.die(3)), "--order", "0", "--kind", "strict"], capsys)
    assert [frac(x) for x in json.loads(out)["results"]["strict"]["coefficients"]] == [1]
    code, out, _ = run(["coeffs", spec(catalog.parallel_singletons(2)), "--kind", "nonstrict", "--order", "4"], capsys)
    assert [frac(x) for x in json.loads(out)["results"]["nonstrict"]["coefficients"]] == [1, 1, F(1, 2), F(1, 4), F(1, 8)]


def test_order_env_override(spec, capsys, monkeypatch):
    monkeypatch.setenv("RUNLEN_ORDER", "3")
    code, out, _ = run(["coeffs", spec(catalog.die(6)), "--kind", "strict"], capsys)
    assert len(json.loads(out)["results"]["strict"]["coefficients"]) == 4


def test_simulate_examples(spec, capsys):
    code, out, _ = run(["simulate", spec(catalog.singleton()), "--kind", "strict", "--length", "10", "--seed", "1"], capsys)
    res = json.loads(out)["results"]["strict"]
    assert code == 0 and res["runs_started"] == 10 and res["counts_by_length"] == {"1": 10}

    code, out, _ = run(["simulate", spec(catalog.die(6)), "--kind", "strict", "--length", "1000000", "--seed", "42"], capsys)
    res = json.loads(out)["results"]["strict"]
    ratio = res["counts_by_length"]["1"] / res["runs_started"]
    assert abs(ratio - 4 / 9) < 0.01

    code, out, _ = run(["simulate", spec(catalog.dart(F(1, 2))), "--kind", "nonstrict", "--length", "1000000", "--seed", "7"], capsys)
    res = json.loads(out)["results"]["nonstrict"]
    assert abs(res["interior_mean"] - 8 / 3) <= 3 * res["interior_mean_se"]


def test_verify_passes(spec, capsys):
    code, out, _ = run(["verify", spec(catalog.die(6)), "--samples", "50000"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["failures"] == []


def test_verify_reports_record_gap(spec, capsys):
    flipped = catalog.two_atom(F(1, 3), reverse=True)
    code, out, _ = run(["verify", spec(flipped), "--samples", "20000"], capsys)
    rep = json.loads(out)
    gap = [c for c in rep["checks"] if c["informational"]]
    assert code == 0 and len(gap) == 1
    assert abs(frac(gap[0]["gap"])) == F(2, 27)


def test_verify_not_probability_exit2(spec, capsys):
    code, _, err = run(["verify", spec(TotalLeaf((Atom(0.5, 0.9),)))], capsys)
    assert code == 2 and "probability" in err


def test_input_errors_exit2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "total", "atoms": [')
    assert run(["stats", str(bad)], capsys)[0] == 2
    assert run(["stats", str(tmp_path / "missing.json")], capsys)[0] == 2


def test_examples_commands(capsys):
    code, out, _ = run(["examples", "exp"], capsys)
    rep = json.loads(out)
    assert rep["results"]["strict.initial"]["mean"] == pytest.approx(1.718282, abs=1e-6)
    code, out, _ = run(["examples", "evendie", "--n", "3"], capsys)
    assert frac(json.loads(out)["results"]["strict.interior"]["mean"]) == F(6, 5)
    code, out, _ = run(["examples", "die", "--n", "6", "--format", "table"], capsys)
    assert "12/7" in out and "12/5" in out
    with pytest.raises(SystemExit) as info:
        main(["examples", "coin"])
    assert info.value.code == 2


def test_json_is_byte_stable(spec, capsys):
    path = spec(catalog.nested_tree())
    first = run(["stats", path, "--order", "12"], capsys)[1]
    second = run(["stats", path, "--order", "12"], capsys)[1]
    assert first == second
    doc = json.loads(first)
    assert list(doc) == sorted(doc)


def test_jsonable_forms():
    assert jsonable(F(3, 4)) == {"num": 3, "den": 4}
    assert jsonable(float("inf")) == "inf"
    assert jsonable({"a": (1, 0.5, F(2))}) == {"a": [1, 0.5, {"num": 2, "den": 1}]}


def test_console_script_runs(spec):
    proc = subprocess.run([sys.executable, "-m", "runlengths.cli", "coeffs", spec(catalog.die(2)),
                           "--kind", "strict", "--order", "2", "--format", "table"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "[1, 1, 1/4" in proc.stdout
