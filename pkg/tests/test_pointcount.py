import pytest
from hypothesis import given, settings, strategies as st

from conftest import case_config
from delpezzo.cluster import BlowupConfig
from delpezzo.vectorfields import stabilizer_point_count
from delpezzo.vectorfields.pointcount import (
    brute_force_count,
    build_problem,
    compiled_available,
    count_problem,
    default_backend,
    default_qs,
    pgl3_order,
    split_prime_power,
)

BACKENDS = ["numpy"] + (["compiled"] if compiled_available() else [])


def empty(p):
    return BlowupConfig.from_json({"characteristic": p, "towers": []})


def test_pgl3_order():
    assert pgl3_order(2) == 168
    assert pgl3_order(3) == 5616


def test_empty_config_q2():
    assert stabilizer_point_count(empty(2), 2) == 168
    assert brute_force_count(empty(2), 2) == 168


def test_one_point_q2():
    cfg = BlowupConfig.from_json({"characteristic": 2, "towers": [{"base": ["1", "0", "0"]}]})
    assert stabilizer_point_count(cfg, 2) == 168 // 7


@pytest.mark.parametrize("cid", ["5A", "7B", "6F"])
def test_brute_force_agrees_with_subspace_enumeration(cid):
    cfg = case_config(2, cid)
    want = brute_force_count(cfg, 2)
    for backend in BACKENDS:
        assert stabilizer_point_count(cfg, 2, backend) == want
        assert stabilizer_point_count(cfg, 2, backend, tangent=False) == want


def test_4m_counts_grow_linearly():
    cfg = case_config(2, "4M")
    n4, n8 = stabilizer_point_count(cfg, 4), stabilizer_point_count(cfg, 8)
    assert n8 * 4 == n4 * 8


@pytest.mark.parametrize(
    "p,cid,q",
    [(2, "1T", 8), (2, "2N", 16), (3, "3K", 9), (3, "8A", 9), (5, "6A", 5), (2, "9A", 4), (3, "4A", 9)],
)
def test_backends_agree(p, cid, q):
    prob = build_problem(case_config(p, cid), q)
    counts = {b: count_problem(prob, b) for b in BACKENDS}
    assert len(set(counts.values())) == 1


@pytest.mark.parametrize("p,cid,q", [(2, "3F", 4), (3, "6F", 9), (5, "5A", 5), (2, "1S", 4)])
def test_tangent_prereduction_does_not_change_counts(p, cid, q):
    cfg = case_config(p, cid)
    assert stabilizer_point_count(cfg, q, tangent=True) == stabilizer_point_count(cfg, q, tangent=False)


@settings(max_examples=15)
@given(st.sampled_from(["5A", "6A", "7B", "6F", "4K", "3C", "8A", "2Q", "1T"]), st.sampled_from([2, 4]))
def test_counts_match_over_backends_char_two(cid, q):
    cfg = case_config(2, cid)
    assert len({stabilizer_point_count(cfg, q, b) for b in BACKENDS}) == 1


def test_default_qs():
    assert default_qs(case_config(2, "5A")) == (4, 8)
    assert default_qs(case_config(3, "5A")) == (9, 27)
    assert default_qs(case_config(5, "5A")) == (5, 25)
    # alpha lives in F_4 for 2N, and F_8 does not contain F_4
    assert default_qs(case_config(2, "2N")) == (4, 16)


def test_bad_field_sizes():
    with pytest.raises(ValueError):
        split_prime_power(12)
    with pytest.raises(ValueError):
        build_problem(case_config(2, "5A"), 9)
    with pytest.raises(ValueError):
        build_problem(case_config(2, "2N"), 8)
    with pytest.raises(ValueError):
        count_problem(build_problem(case_config(2, "5A"), 2), "fortran")


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("DELPEZZO_PURE_PYTHON", "1")
    assert default_backend() == "numpy"
