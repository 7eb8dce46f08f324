import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from rentfair.cli import generate, main
from rentfair.io import InstanceError, InstanceFile, ResultFile, format_rational, parse_rational
from rentfair.model import Affine, Economy, Family, Objective, SlopeSet, sb_set
from rentfair.solver import solve

E2_DOC = {
    "agents": ["1", "2"], "rooms": ["a", "b"], "slope_set": [0, 1],
    "values": [[10, 2], [4, 6]], "budgets": [5, 5], "rho_index": [1, 1], "total_rent": 10,
    "objective": {"family": "maxmin-utility", "scope": ["1", "2"], "affine": []},
}
E1_DOC = dict(E2_DOC, budgets=[0, 0], rho_index=[0, 0], slope_set=["0"])


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_rationals_exactly():
    assert parse_rational(3) == 3
    assert parse_rational("0.1") == F(1, 10)
    assert parse_rational("-7/21") == F(-1, 3)
    assert parse_rational(" 2.50 ") == F(5, 2)
    with pytest.raises(InstanceError):
        parse_rational("abc")
    with pytest.raises(InstanceError):
        parse_rational(True)
    assert format_rational(F(19, 3)) == "19/3" and format_rational(F(7)) == "7"
    doc = InstanceFile.parse('{"agents":["x"],"rooms":["r"],"slope_set":[0],"values":[[0.1]],'
                             '"budgets":[0],"rho_index":[0],"total_rent":1.25}')
    assert doc.economy.v[0][0] == F(1, 10) and doc.economy.total_rent == F(5, 4)


def test_solve_e2(capsys, write):
    code, out, _ = run(capsys, "solve", write("e2.json", E2_DOC))
    doc = json.loads(out)
    assert code == 0
    assert doc["rents"] == {"a": "19/3", "b": "11/3"}
    assert doc["objective_value"] == "7/3" and doc["certified"] is True
    assert "trace" not in doc


def test_solve_writes_trace(capsys, write, tmp_path):
    out_path = tmp_path / "out.json"
    code, _, _ = run(capsys, "solve", write("e2.json", E2_DOC), "--trace", "--output", str(out_path))
    trace = json.loads(out_path.read_text())["trace"]
    assert code == 0 and trace["boundary_rent"] == "18"
    first = trace["iterations"][0]
    assert first["step_rents"] == {"a": "7", "b": "5"}
    assert (first["sb_before"], first["sb_after"]) == (4, 2)


def test_solve_rejects_slope_set_without_zero(capsys, write):
    code, _, err = run(capsys, "solve", write("bad.json", dict(E2_DOC, slope_set=[1, 2])))
    assert code == 2
    assert "slope set must contain 0" in json.loads(err)["violations"]


def test_solve_reports_parse_errors(capsys, write):
    code, _, err = run(capsys, "solve", write("bad.json", "{not json"))
    assert code == 2 and json.loads(err)["violations"]
    code, _, err = run(capsys, "solve", write("bad.json", dict(E2_DOC, values=[[1, 2, 3], [4, 5, 6]])))
    assert code == 2
    code, _, _ = run(capsys, "solve", "/nonexistent/instance.json")
    assert code == 2


def test_single_agent(capsys, write):
    doc = {"agents": ["1"], "rooms": ["a"], "slope_set": ["0"], "values": [["3"]],
           "budgets": ["1"], "rho_index": [0], "total_rent": "7"}
    code, out, _ = run(capsys, "solve", write("one.json", doc))
    doc = json.loads(out)
    assert code == 0 and doc["rents"] == {"a": "7"} and doc["certified"] is True


def test_verify(capsys, write, tmp_path):
    inst = write("e2.json", E2_DOC)
    res = str(tmp_path / "res.json")
    run(capsys, "solve", inst, "--output", res)
    assert run(capsys, "verify", inst, res)[0] == 0

    claim = {"assignment": {"1": "a", "2": "b"}, "rents": {"a": "6", "b": "4"},
             "utilities": {"1": "4", "2": "2"}, "objective_value": "2", "certified": True}
    code, out, _ = run(capsys, "verify", write("e1.json", E1_DOC), write("claim.json", claim))
    assert code != 0 and "agent 1 unreached" in out

    tampered = dict(claim, rents={"a": "6", "b": "5"})
    code, out, _ = run(capsys, "verify", write("e1.json", E1_DOC), write("t.json", tampered))
    assert code != 0 and "budget balance violated" in out


def test_oracle_command(capsys, write):
    code, out, _ = run(capsys, "oracle", write("e1.json", E1_DOC))
    assert code == 0 and json.loads(out)["objective_value"] == "3"
    code, out, _ = run(capsys, "oracle", write("e2.json", E2_DOC))
    assert json.loads(out)["objective_value"] == "7/3" and "trace" not in json.loads(out)
    six = generate(6, 1, 0).serialize()
    code, _, err = run(capsys, "oracle", write("six.json", six))
    assert code == 3 and "size guard" in err


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", "--n", "2", "--k", "2", "--seed", "7")[1]
    b = run(capsys, "gen", "--n", "2", "--k", "2", "--seed", "7")[1]
    assert a == b
    doc = json.loads(run(capsys, "gen", "--n", "3", "--k", "1", "--seed", "1")[1])
    assert doc["slope_set"] == ["0"]
    assert run(capsys, "gen", "--n", "0")[0] == 2


def test_gen_low_tightness_leaves_no_budget_violations():
    from rentfair.oracle import oracle_solve
    for seed in range(15):
        inst = generate(3, 3, seed, "low")
        for fam in Family:
            obj = Objective.full(fam, 3)
            assert sb_set(inst.economy, oracle_solve(inst.economy, obj)[1].rents) == set()
            assert sb_set(inst.economy, solve(inst.economy, obj).allocation.rents) == set()


def test_generated_instances_verify(capsys, tmp_path):
    for seed in range(10):
        for tight in ("low", "mid", "high"):
            inst = tmp_path / "i.json"
            res = tmp_path / "r.json"
            inst.write_text(generate(4, 3, seed, tight).serialize())
            assert main(["solve", str(inst), "--output", str(res)]) == 0
            assert main(["verify", str(inst), str(res)]) == 0
    capsys.readouterr()


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--n-range", "2..6", "--k", "2", "--trials", "20")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 100
    assert all(int(r["iterations"]) <= int(r["bound"]) for r in rows)
    code, out, _ = run(capsys, "bench", "--n-range", "2..7", "--k", "1", "--trials", "5")
    assert all(int(r["iterations"]) <= 1 for r in csv.DictReader(io.StringIO(out)))
    code, out, _ = run(capsys, "bench", "--n-range", "5..4")
    assert out.strip() == "n,k,trial,iterations,bound,wall_time"


def test_require_nonnegative(capsys, write):
    code, out, _ = run(capsys, "solve", write("e1.json", E1_DOC), "--require-nonnegative")
    assert code == 0 and out.strip() == "possible"
    lopsided = dict(E1_DOC, values=[[100, 0], [100, 0]])
    code, out, _ = run(capsys, "solve", write("l.json", lopsided), "--require-nonnegative")
    assert out.strip() == "impossible"


def test_module_entry_point(tmp_path):
    path = tmp_path / "e2.json"
    path.write_text(json.dumps(E2_DOC))
    proc = subprocess.run([sys.executable, "-m", "rentfair", "solve", str(path)],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["objective_value"] == "7/3"


rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=50)


@st.composite
def instances(draw):
    n = draw(st.integers(1, 4))
    k = draw(st.integers(1, 3))
    slopes = SlopeSet(tuple(sorted({F(0)} | set(draw(st.lists(
        st.fractions(min_value=F(1, 10), max_value=5, max_denominator=10), min_size=k - 1,
        max_size=k - 1))))))
    values = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=n, max_size=n))
    budgets = draw(st.lists(st.fractions(min_value=0, max_value=500, max_denominator=7),
                            min_size=n, max_size=n))
    rhos = draw(st.lists(st.sampled_from(slopes.rhos), min_size=n, max_size=n))
    e = Economy.build(values, budgets, rhos, draw(rationals), slope_set=slopes)
    fam = draw(st.sampled_from(list(Family)))
    scope = tuple(sorted(draw(st.sets(st.integers(0, n - 1), min_size=1))))
    affine = tuple(Affine(draw(st.fractions(min_value=F(1, 9), max_value=9, max_denominator=9)),
                          draw(rationals)) for _ in scope)
    return InstanceFile(e, Objective(fam, scope, affine))


@given(instances())
@settings(max_examples=150, deadline=None)
def test_instance_round_trip(inst):
    assert InstanceFile.parse(inst.serialize()) == inst


@given(st.dictionaries(st.text("abcxyz", min_size=1, max_size=3), rationals, min_size=1, max_size=4),
       rationals, st.booleans())
@settings(max_examples=150, deadline=None)
def test_result_round_trip(rents, value, certified):
    ids = list(rents)
    res = ResultFile(dict(zip(ids, reversed(ids))), rents, {k: -v for k, v in rents.items()},
                     value, certified, {"iterations": [{"s": 1, "step_value": format_rational(value)}]})
    assert ResultFile.parse(res.serialize()) == res
