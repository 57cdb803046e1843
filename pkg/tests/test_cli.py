import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given

from cocyclelab import CircleRotation, FinitePermutation, ParseError, instability_sweep
from cocyclelab.cli import SWEEP_HEADER, emit_sweep_csv, run
from cocyclelab.serialize import (
    observable_from_record,
    observable_to_record,
    parse_rational,
    system_from_record,
    system_to_record,
)

from conftest import finite_system_and_observable, permutations, pwl_observables, rotations

PERM3 = '{"type":"perm","map":[1,2,0]}'
ROT25 = '{"type":"rotation","alpha":"2/5"}'
ROT13 = '{"type":"rotation","alpha":"1/3"}'


def test_solve_example():
    code, out = run(["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","-2","1"]}', "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["status"] == "solved" and rec["residual"] == "0"
    assert rec["u"] == {"type": "finite", "values": ["1", "2", "0"]}


def test_check_example():
    code, out = run(["check", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","0","0"]}'])
    assert code == 1
    rec = json.loads(out)
    assert rec["status"] == "obstructed"
    assert rec["measure_integral"] == "1/3" and rec["birkhoff_value"] == "1"


def test_check_coboundary():
    code, out = run(["check", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","-2","1"]}'])
    assert code == 0
    assert json.loads(out)["status"] == "coboundary"


def test_solve_obstructed_exit_status():
    code, out = run(["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","0","0"]}'])
    assert code == 1
    rec = json.loads(out)
    assert rec == {
        "status": "obstructed",
        "witness_point": "0",
        "orbit_length": "3",
        "birkhoff_value": "1",
        "measure_integral": "1/3",
    }


def test_witness_example():
    code, out = run(["witness", "--system", ROT25, "--n", "1", "--format", "json"])
    assert code == 0
    rec = json.loads(out)
    assert rec["sup_phi"] == "1/2" and rec["r_n"] == "1/10"
    assert rec["support_disjoint"] is True and rec["expanded_matches_direct"] is True


def test_witness_periodic_exit_status(capsys):
    code, out = run(["witness", "--system", ROT13, "--n", "2"])
    assert code == 2 and out == ""
    assert "periodic" in capsys.readouterr().err


def test_sweep_csv_rows():
    code, out = run(["sweep", "--system", '{"type":"rotation","alpha":"233/610"}', "--n-max", "4", "--format", "csv"])
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == ",".join(SWEEP_HEADER)
    assert [row.split(",")[2] for row in lines[1:]] == ["1/2", "1/4", "1/8", "1/16"]


def test_emit_sweep_csv_first_row():
    text = emit_sweep_csv(instability_sweep(CircleRotation(Fraction(2, 5)), 1))
    assert text.splitlines()[1].startswith("1,1/10,1/2,0.500000000000,1/2,1")
    with pytest.raises(ValueError):
        emit_sweep_csv([])


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1/0","1","1"]}'],
        ["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["abc","1","1"]}'],
        ["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":[0.5,1,1]}'],
        ["solve", "--system", '{"type":"perm","map":[0,0,1]}', "--cocycle", '{"type":"finite","values":["0","0","0"]}'],
        ["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","1"]}'],
        ["solve", "--system", PERM3, "--cocycle", '{"type":"pwl","bumps":[]}'],
        ["solve", "--system", "not json", "--cocycle", "{}"],
        ["solve", "--system", '{"type":"torus"}', "--cocycle", "{}"],
        ["solve", "--system", PERM3, "--cocycle", "@/nonexistent/file.json"],
        ["witness", "--system", ROT25, "--n", "zero"],
        ["witness", "--system", ROT25, "--n", "0"],
        ["witness", "--system", ROT25, "--n", "1", "--bogus"],
        ["witness", "--system", '{"type":"rotation","alpha":"3/2"}', "--n", "1"],
        ["frobnicate"],
        [],
    ],
)
def test_input_errors_exit_3(argv, capsys):
    code, out = run(argv)
    assert code == 3 and out == ""
    err = capsys.readouterr().err
    assert err.startswith("cocyclelab:") and err.count("\n") == 1


def test_file_inputs(tmp_path):
    sys_file = tmp_path / "sys.json"
    cocycle_file = tmp_path / "phi.json"
    sys_file.write_text(PERM3)
    cocycle_file.write_text('{"type":"finite","values":["1","-2","1"]}')
    code, out = run(["solve", "--system", f"@{sys_file}", "--cocycle", f"@{cocycle_file}"])
    assert code == 0 and json.loads(out)["residual"] == "0"


def test_info():
    code, out = run(["info", "--system", '{"type":"perm","map":[1,0,3,4,2]}'])
    rec = json.loads(out)
    assert code == 0 and rec["period"] == 6 and rec["cohomology_dimension"] == 2
    code, out = run(["info", "--system", '{"type":"rotation","alpha":"233/610"}'])
    assert json.loads(out)["max_witness_level"] == 8


def test_csv_solve_output():
    code, out = run(["solve", "--system", PERM3, "--cocycle", '{"type":"finite","values":["1","-2","1"]}', "--format", "csv"])
    assert code == 0
    assert out.splitlines()[:3] == ["key,value", "status,solved", "u.type,finite"]


def test_determinism():
    argv = ["sweep", "--system", '{"type":"rotation","alpha":"233/610"}', "--n-max", "5"]
    first = run(argv)
    assert run(argv) == first
    assert run(argv + ["--parallel"]) == first


def test_grid_env(monkeypatch):
    monkeypatch.setenv("COCYCLELAB_GRID", "1000")
    code, out = run(["witness", "--system", ROT25, "--n", "1"])
    assert code == 0 and float(json.loads(out)["grid_sup_phi_decimal"]) <= 0.5
    monkeypatch.setenv("COCYCLELAB_GRID", "-4")
    assert run(["witness", "--system", ROT25, "--n", "1"])[0] == 3


def test_rotation_solve_via_cli():
    phi = {
        "type": "pwl",
        "offset": "0",
        "bumps": [
            {"center": "0", "radius": "1/10", "weight": "-1"},
            {"center": "2/3", "radius": "1/10", "weight": "1"},
        ],
    }
    code, out = run(["solve", "--system", ROT13, "--cocycle", json.dumps(phi)])
    assert code == 0 and json.loads(out)["residual"] == "0"


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "cocyclelab.cli", "witness", "--system", ROT13, "--n", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2 and proc.stdout == ""


@given(permutations)
def test_system_round_trip_perm(sys_):
    assert system_from_record(json.loads(json.dumps(system_to_record(sys_)))) == sys_


@given(rotations)
def test_system_round_trip_rotation(sys_):
    assert system_from_record(json.loads(json.dumps(system_to_record(sys_)))) == sys_


@given(pwl_observables)
def test_observable_round_trip_pwl(obs):
    assert observable_from_record(json.loads(json.dumps(observable_to_record(obs)))) == obs


@given(finite_system_and_observable())
def test_observable_round_trip_finite(pair):
    _, obs = pair
    assert observable_from_record(json.loads(json.dumps(observable_to_record(obs)))) == obs


def test_parse_rational():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational(" -7 ") == -7
    assert parse_rational(4) == 4
    for bad in ("1/0", "x", 0.25, True, None):
        with pytest.raises(ParseError):
            parse_rational(bad)
    assert system_to_record(FinitePermutation((1, 0))) == {"type": "perm", "map": [1, 0]}
