import json
import subprocess
import sys

import pytest

from contractkit import platoon
from contractkit.cli import main
from contractkit.documents import (
    bundled_path,
    dump_system,
    dumps,
    load_contract,
    load_system,
    parse_system,
)
from contractkit.errors import ParseError
from contractkit.subspace import Matrix


def data(name: str) -> str:
    return str(bundled_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- documents ------------------------------------------------------------------------


@pytest.mark.parametrize("name, builder", [
    ("assumptions.json", platoon.assumptions),
    ("guarantees.json", platoon.guarantees),
    ("sigma.json", platoon.follower),
    ("sigma_constrained.json", platoon.constrained_follower),
    ("vehicle1.json", platoon.lead_vehicle),
])
def test_bundled_systems_match_builders_and_round_trip(name, builder):
    sys_ = load_system(data(name))
    assert sys_ == builder()
    again = parse_system(json.loads(dumps(dump_system(sys_))))
    assert again == sys_ and again.name == sys_.name


def test_bundled_contract(vehicles):
    C = load_contract(data("contract.json"))
    assert C.assumptions == vehicles.A and C.guarantees == vehicles.G


def test_decimal_and_fraction_entries_are_exact():
    s = parse_system({"A": [["0.8", "-1/2"], [1, 0]], "C": [["1", "0"]]})
    assert s.A == Matrix([["4/5", "-1/2"], [1, 0]])
    assert s.m == 0 and s.q == 0


def test_parse_errors_name_the_problem():
    with pytest.raises(ParseError, match="row 2 has 1 entries, expected 2"):
        parse_system({"A": [["1", "0"], ["1"]], "C": [["1", "0"]]})
    with pytest.raises(ParseError, match="missing C"):
        parse_system({"A": [["1"]]})
    with pytest.raises(ParseError, match="bad entry"):
        parse_system({"A": [["x"]], "C": [["1"]]})
    with pytest.raises(ParseError, match="inconsistent system"):
        parse_system({"A": [["1"]], "G": [["1"], ["1"]], "C": [["1"]]})


# -- verdict commands -------------------------------------------------------------------


def test_consistent_reports_dimension(capsys):
    code, out, _ = run(capsys, "consistent", data("guarantees.json"))
    assert code == 0
    assert out.splitlines()[0] == "dim 3"
    code, out, _ = run(capsys, "consistent", data("sigma.json"))
    assert out.splitlines()[0] == "dim 4"


def test_consistent_json(capsys):
    code, out, _ = run(capsys, "consistent", "--json", data("guarantees.json"))
    doc = json.loads(out)
    assert doc["dim"] == 3 and doc["ambient_dim"] == 4 and len(doc["basis"]) == 3


def test_implements_verdicts_and_exit_codes(capsys):
    code, out, _ = run(capsys, "implements", data("sigma.json"), data("contract.json"))
    assert (code, out.strip()) == (1, "FAILS(NotFull)")
    code, out, _ = run(capsys, "implements", data("sigma_constrained.json"), data("contract.json"))
    assert (code, out.strip()) == (0, "HOLDS")


def test_implements_witness_and_json(capsys):
    code, out, _ = run(capsys, "implements", "--witness", data("sigma.json"), data("contract.json"))
    lines = out.splitlines()
    assert lines[0] == "FAILS(NotFull)"
    assert lines[1] == "witness dim 3 in 8+4"
    assert lines[2] == "left projection dim 3"
    assert len(lines) == 6
    code, out, _ = run(capsys, "implements", "--json", data("sigma.json"), data("contract.json"))
    doc = json.loads(out)
    assert doc["holds"] is False and doc["failure_reason"] == "NotFull"
    assert doc["is_relation"] is True and doc["witness"]["relation"]["dim"] == 3


def test_compatible_and_simulates(capsys):
    code, out, _ = run(capsys, "compatible", data("vehicle1.json"), data("contract.json"))
    assert (code, out.strip()) == (0, "HOLDS")
    code, out, _ = run(capsys, "simulates", data("vehicle1.json"), data("assumptions.json"))
    assert (code, out.strip()) == (0, "HOLDS")
    # the drag term is absorbed by the free disturbance: the converse holds too
    code, out, _ = run(capsys, "simulates", data("assumptions.json"), data("vehicle1.json"))
    assert (code, out.strip()) == (0, "HOLDS")
    code, out, _ = run(capsys, "simulates", data("assumptions.json"), data("sigma_constrained.json"))
    assert code == 1 and out.startswith("FAILS(")


def test_refines_reports_both_legs(capsys):
    code, out, _ = run(capsys, "refines", data("contract.json"), data("contract.json"))
    assert code == 0
    assert out.splitlines() == ["HOLDS", "assumptions: HOLDS", "guarantees: HOLDS"]


def test_refines_failure_names_the_leg(tmp_path, capsys):
    doc = {"assumptions": data("sigma_constrained.json"), "guarantees": data("guarantees.json")}
    narrow = tmp_path / "narrow.json"
    narrow.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "refines", str(narrow), data("contract.json"))
    assert code == 1
    assert out.splitlines()[0].startswith("FAILS(assumptions:")
    code, out, _ = run(capsys, "refines", "--json", str(narrow), data("contract.json"))
    assert json.loads(out)["assumptions"]["holds"] is False


# -- file-producing commands -------------------------------------------------------------


def test_compose_writes_a_loadable_system(tmp_path, capsys):
    out_file = tmp_path / "closed.json"
    code, _, _ = run(capsys, "compose", data("assumptions.json"), data("sigma.json"), "--out", str(out_file))
    assert code == 0
    closed = load_system(out_file)
    assert (closed.n, closed.m, closed.q) == (8, 5, 4)
    code, out, _ = run(capsys, "consistent", str(out_file))
    assert out.splitlines()[0] == "dim 4"


def test_saturate_writes_a_contract(tmp_path, capsys):
    out_file = tmp_path / "saturated.json"
    assert run(capsys, "saturate", data("contract.json"), "--out", str(out_file))[0] == 0
    C = load_contract(out_file)
    assert C.guarantees.n == 8
    code, out, _ = run(capsys, "implements", data("sigma.json"), str(out_file))
    assert (code, out.strip()) == (1, "FAILS(NotFull)")


def test_simulate_csv(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--t-end", "1", "--dt", "0.5")
    assert code == 0
    assert out.splitlines()[0] == "t,v1,v2,e"
    assert len(out.splitlines()) == 4
    target = tmp_path / "run.csv"
    run(capsys, "simulate", "--x0", "1,2,0.8,1", "--out", str(target))
    rows = target.read_text().splitlines()
    assert len(rows) == 15002
    assert rows[1].endswith(",0.800000000")


def test_simulate_rejects_bad_arguments(capsys):
    code, _, err = run(capsys, "simulate", "--params", "1,0.25")
    assert code == 2 and "--params" in err
    code, _, err = run(capsys, "simulate", "--params", "1,0,0.5")
    assert code == 2 and "k must be positive" in err
    code, _, err = run(capsys, "simulate", "--dt", "0.3", "--t-end", "1")
    assert code == 2 and "multiple" in err


# -- errors ------------------------------------------------------------------------------


def test_malformed_rows_exit_with_message(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [["1", "0"], ["0"]], "C": [["1", "0"]]}))
    code, out, err = run(capsys, "consistent", str(bad))
    assert code == 2 and out == ""
    assert "row 2" in err and "'A'" in err


def test_missing_file_and_bad_json(tmp_path, capsys):
    code, _, err = run(capsys, "consistent", str(tmp_path / "nope.json"))
    assert code == 2 and "nope.json" in err
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    code, _, err = run(capsys, "consistent", str(broken))
    assert code == 2 and "invalid JSON" in err


def test_dimension_mismatch_exit(tmp_path, capsys):
    small = tmp_path / "small.json"
    small.write_text(json.dumps({"A": [["0"]], "G": [["1"]], "C": [["1"]]}))
    code, _, err = run(capsys, "simulates", str(small), data("guarantees.json"))
    assert code == 2 and err.startswith("error:")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "contractkit", "implements", data("sigma.json"), data("contract.json")],
        capture_output=True, text=True,
    )
    assert proc.returncode == 1
    assert proc.stdout.strip() == "FAILS(NotFull)"
