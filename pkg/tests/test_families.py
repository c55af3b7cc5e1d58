import pytest

from conftest import case_config, corpus
from delpezzo.cluster import BlowupConfig
from delpezzo.vectorfields import (
    FamilyError,
    StabFamily,
    check_family,
    family_point_count,
    family_tangent_dim,
    pgl3_order,
    verify_family,
)

DIAG = {"matrix": [["1", "0", "0"], ["0", "e", "0"], ["0", "0", "i"]], "units": ["e", "i"]}
INVOLUTION = {"matrix": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "i"]], "relations": ["i^2=1"]}


def fam(data):
    return StabFamily.from_json(data)


def one_point(p):
    return BlowupConfig.from_json({"characteristic": p, "towers": [{"base": ["1", "0", "0"]}]})


def test_pgl3_stabilizes_the_plane():
    cfg = BlowupConfig.from_json({"characteristic": 3, "towers": []})
    assert verify_family(cfg, StabFamily.pgl3())


@pytest.mark.parametrize("p", [0, 2, 3])
def test_one_point_family(p):
    rec = corpus(p)["8A"]
    assert verify_family(one_point(p), fam(rec.expected["family"]))


def test_torus_misses_directions_of_7b():
    check = check_family(case_config(0, "7B"), fam(DIAG))
    assert check.fixes and check.closed and not check.complete
    assert not check
    assert "tangent dimension" in check.reason


def test_upper_triangular_does_not_fix_5a():
    data = {"matrix": [["1", "b", "0"], ["0", "1", "0"], ["0", "0", "1"]]}
    check = check_family(case_config(0, "5A"), fam(data))
    assert not check.fixes


def test_closure():
    plane = BlowupConfig.from_json({"characteristic": 0, "towers": []})
    borel = {"matrix": [["1", "b", "0"], ["0", "e", "0"], ["0", "0", "1"]], "units": ["e"]}
    assert check_family(plane, fam(borel)).closed
    # b2 + b1*e2 squares to 2*b1*b2*e2, so b^2 = 0 is not preserved
    check = check_family(plane, fam({**borel, "relations": ["b^2"]}))
    assert not check.closed and "b^2" in check.reason
    # a product has b1*b2 in the corner the shape pins to 0
    shear = {"matrix": [["1", "b", "0"], ["0", "1", "b"], ["0", "0", "1"]]}
    assert not check_family(plane, fam(shear)).closed


def test_tangent_dims():
    assert family_tangent_dim(StabFamily.pgl3(), 0) == 8
    assert family_tangent_dim(fam(INVOLUTION), 2) == 1
    assert family_tangent_dim(fam(INVOLUTION), 5) == 0
    assert family_tangent_dim(fam(corpus(2)["1T"].expected["family"]), 2) == 3


def test_family_errors():
    with pytest.raises(FamilyError):
        fam({"matrix": [["1", "0"], ["0", "1"]]})
    with pytest.raises(FamilyError):
        fam({"matrix": [["x", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]})
    with pytest.raises(FamilyError):
        fam({"matrix": DIAG["matrix"], "relations": ["e+1"]})
    with pytest.raises(FamilyError):
        fam({"matrix": DIAG["matrix"], "relations": ["e^2", "e^3=1"]})
    with pytest.raises(FamilyError):
        fam({"matrix": DIAG["matrix"], "units": ["w"]})
    with pytest.raises(FamilyError):
        fam({"matrix": [["1", "(", "0"], ["0", "1", "0"], ["0", "0", "1"]]})


def test_json_round_trip():
    for p in (0, 2, 3, 5):
        for rec in corpus(p):
            data = rec.expected["family"]
            again = fam(fam(data).to_json())
            assert again == fam(data)
    assert StabFamily.pgl3().to_json() == "PGL3"


def test_point_counts():
    assert family_point_count(StabFamily.pgl3(), 4) == pgl3_order(4)
    assert family_point_count(fam(corpus(2)["8A"].expected["family"]), 2) == 24
    assert family_point_count(fam(INVOLUTION), 4) == 1
    assert family_point_count(fam(INVOLUTION), 5) == 2
    assert family_point_count(fam(DIAG), 5) == 16
