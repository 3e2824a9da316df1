import pytest

from moufang.axioms import verify_gp_axioms, verify_moufang, verify_wd_axioms, wd_table
from moufang.fields import PrimeField
from moufang.geometry import (FlagBuilding, ProjectivePlane, QuadraticSpace,
                              QuadricQuadrangle, transposition)

F2 = PrimeField(2)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_gp_axioms_on_planes(q):
    plane = ProjectivePlane(PrimeField(q))
    res = verify_gp_axioms(plane.incidence_data())
    assert res.passed
    assert res.details["order"] == (q, q)
    assert res.details["points"] == q * q + q + 1


def test_gp_axioms_on_quadrangle():
    qs = QuadraticSpace(F2, [[F2.one, F2.one], [F2.zero, F2.one]])
    quad = QuadricQuadrangle(F2, qs)
    res = verify_gp_axioms(quad.incidence_data())
    assert res.passed
    assert res.details["points"] == 27
    assert res.details["lines"] == 45
    assert res.details["order"] == (2, 4)


def test_gp_duality():
    plane = ProjectivePlane(PrimeField(3))
    res = verify_gp_axioms(plane.dual_incidence_data())
    assert res.passed and res.details["order"] == (3, 3)


def test_gp_fails_with_witness_on_damaged_fano():
    plane = ProjectivePlane(F2)
    data = plane.incidence_data()
    dropped = len(data.lines) - 1
    data.lines.pop()
    data.pairs = {(i, j) for (i, j) in data.pairs if j != dropped}
    res = verify_gp_axioms(data)
    assert not res.passed
    assert res.witness["axiom"] == "GP1"


def test_gp3_failure_carries_a_path():
    # doubling a line creates two distinct shortest paths between its points
    plane = ProjectivePlane(F2)
    data = plane.incidence_data()
    base = len(data.lines)
    data.lines.append(data.lines[0])
    data.pairs |= {(i, base) for (i, j) in set(data.pairs) if j == 0}
    res = verify_gp_axioms(data)
    assert not res.passed
    assert res.witness["axiom"] in ("GP3", "GP2")
    if res.witness["axiom"] == "GP3":
        assert res.witness["paths"] > 1 and len(res.witness["one_path"]) >= 2


def test_wd_axioms_small_and_large():
    res = verify_wd_axioms(FlagBuilding(F2, 2))
    assert res.passed and res.details["chambers"] == 21
    res = verify_wd_axioms(FlagBuilding(F2, 3))
    assert res.passed and res.details["chambers"] == 315


def test_wd_fails_on_corrupted_table():
    fb = FlagBuilding(F2, 2)
    chambers, table = wd_table(fb)
    old = table[3, 7]
    table[3, 7] = transposition(3, 1) if old != transposition(3, 1) else transposition(3, 2)
    res = verify_wd_axioms(fb, table=table)
    assert not res.passed
    assert res.witness["axiom"].startswith("WD")


def test_moufang_planes():
    for q in (2, 3):
        res = verify_moufang(ProjectivePlane(PrimeField(q)))
        assert res.passed, res.witness


def test_moufang_fails_for_identity_only_group():
    res = verify_moufang(ProjectivePlane(F2), candidate_params=[F2.zero])
    assert not res.passed
    assert res.witness["orbit_size"] == 1
