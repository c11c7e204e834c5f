from __future__ import annotations

import json

import pytest

from coxfact.circuits import standard_circuit
from coxfact.cli import main, parse_root, parse_scalar
from coxfact.rootsys import build
from coxfact.scalar import Q5


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_h3(capsys):
    code, out, _ = run(capsys, "classify", "H3")
    assert code == 0 and out.splitlines()[0] == "bases: 11, full circuits: 15"


def test_classify_a3(capsys):
    code, out, _ = run(capsys, "classify", "A3", "--format", "json")
    assert code == 0 and json.loads(out)["full_circuit_orbits"] == 1


def test_classify_writes_files(capsys, tmp_path):
    code, _, _ = run(capsys, "classify", "C3", "--out", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "C3.jsonl").read_text().splitlines()
    assert len(lines) == 7 + 3
    assert (tmp_path / "C3.dot").read_text().count("graph ") == 3


def test_classify_budget_exit_code(capsys):
    code, _, err = run(capsys, "classify", "E7", "--budget", "1000")
    assert code == 2 and "budget" in err


@pytest.mark.parametrize("argv,needle", [
    (("verify", "B2", "--length", "4"), "agreement: true"),
    (("verify", "I2:5", "--length", "4"), "agreement: true"),
    (("verify", "A2", "--length", "2"), "orbit of size 3"),
])
def test_verify(capsys, argv, needle):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and needle in out


def test_verify_a2_single_orbit_json(capsys):
    code, out, _ = run(capsys, "verify", "A2", "--length", "2", "--format", "json")
    data = json.loads(out)
    assert code == 0 and [o["size"] for o in data["orbits"]] == [3]


def test_verify_custom_order(capsys):
    code, out, _ = run(capsys, "verify", "A3", "--length", "3", "--coxeter-order", "2,0,1")
    assert code == 0 and "agreement: true" in out


def test_dihedral_printout(capsys):
    code, out, _ = run(capsys, "dihedral", "3", "7", "5")
    assert code == 0
    assert out.splitlines() == [
        "   (3, 7, 5)  M=4",
        "-> s1^-1: (-1, 3, 5)  M=6",
        "-> s2^-1: (-1, 1, 3)  M=4",
        "-> s1: (1, 3, 3)  M=2",
    ]


def test_dihedral_projection(capsys):
    code, out, _ = run(capsys, "dihedral", "3", "7", "5", "--project", "5", "--format", "json")
    assert code == 0 and json.loads(out)["projected"] == [1, 3, 3]


def test_standard_form_identity_word(capsys):
    code, out, _ = run(capsys, "standard-form", "A2", "1", "2", "1", "2", "1", "2", "--format", "json")
    data = json.loads(out)
    o = data["output"]
    assert code == 0 and o[0] == o[1] and o[2] == o[3] and o[4] == o[5]
    assert data["reflection_length"] == 0


def test_standard_form_coordinates(capsys):
    code, out, _ = run(capsys, "standard-form", "A2", "1,-1,0", "0,1,-1", "1,0,-1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["output"][0] == data["output"][1]


def test_random_sweep_is_reproducible(capsys):
    first = run(capsys, "standard-form", "H3", "--random", "30", "--seed", "4")
    second = run(capsys, "standard-form", "H3", "--random", "30", "--seed", "4")
    assert first == second and first[0] == 0


def test_rootsys_dump(capsys):
    code, out, _ = run(capsys, "rootsys", "H3", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["roots"]) == 30 and data["n_positive"] == 15


def test_rootsys_text(capsys):
    code, out, _ = run(capsys, "rootsys", "A2")
    assert code == 0 and "0: e1-e2" in out


def test_orbit(capsys):
    code, out, _ = run(capsys, "orbit", "A2", "0", "1", "--traces", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["size"] == 3 and len(data["traces"]) == 3


def test_orbit_truncated_exit_code(capsys):
    code, _, _ = run(capsys, "orbit", "A3", "0", "1", "2", "--budget", "3")
    assert code == 2


def test_circuits_enumeration(capsys):
    code, out, _ = run(capsys, "circuits", "A3")
    assert code == 0 and out.strip() == "circuits: 7, full: 3, connected acuteness graphs: 0"


def test_circuits_dot(capsys):
    members = standard_circuit(build("D3"), 2, 2).members
    code, out, _ = run(capsys, "circuits", "D3", *map(str, members), "--format", "dot")
    assert code == 0 and out.startswith("graph")


def test_not_a_circuit(capsys):
    code, out, _ = run(capsys, "circuits", "A3", *map(str, build("A3").simple))
    assert code == 0 and "not a circuit" in out


@pytest.mark.parametrize("argv", [
    ("rootsys", "Q7"),
    ("verify", "A2"),
    ("orbit", "A2", "17"),
    ("orbit", "A2", "1,1,1"),
    ("classify", "A3", "--budget", "0"),
    ("dihedral", "1", "x", "2"),
])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 3


def test_parse_helpers():
    assert parse_scalar("1/2") == pytest.approx(0.5)
    assert parse_scalar("1+1*r5") == Q5(1, 1)
    assert parse_scalar("-1-r5") == Q5(-1, -1)
    assert parse_scalar("2*r5") == Q5(0, 2)
    rs = build("H3")
    for i in range(rs.N):
        v = rs.coords[i]
        token = ",".join(str(x) for x in v)
        assert parse_root(rs, token) == i
