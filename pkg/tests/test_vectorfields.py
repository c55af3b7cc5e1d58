"""Fixing conditions, h0 of vector fields and its monotonicity."""

import pytest
from hypothesis import assume, given, strategies as st

from conftest import case_config, corpus
from delpezzo.cluster import BlowupConfig, agp_check
from delpezzo.corpus import lineage_pairs
from delpezzo.exactalg import QQ, dual_extend, fq_make
from delpezzo.plane import PglElem
from delpezzo.vectorfields import fixes_config, h0_vector_fields
from delpezzo.vectorfields.conditions import tangent_condition_matrix

F5 = fq_make(5)


def test_identity_fixes_every_corpus_config():
    for p in (0, 2, 3, 5):
        for rec in corpus(p):
            cfg = case_config(p, rec.id)
            assert fixes_config(PglElem.identity(cfg.field), cfg)


def test_diagonal_fixes_5a():
    cfg = corpus(5)["5A"].config(5)
    assert fixes_config(PglElem.parse(F5, [[1, 0, 0], [0, 1, 0], [0, 0, 2]]), cfg)


def test_unipotent_moves_5a():
    cfg = corpus(5)["5A"].config(5)
    assert not fixes_config(PglElem.parse(F5, [[1, 1, 0], [0, 1, 0], [0, 0, 1]]), cfg)


def test_dual_number_points():
    # I + eps*E_33 fixes 5A (the torus direction), I + eps*E_12 does not
    cfg = case_config(0, "5A")
    R = dual_extend(QQ)
    eps = R.var("eps")

    def g(k):
        m = [[R(int(i == j)) for j in range(3)] for i in range(3)]
        m[k // 3][k % 3] = m[k // 3][k % 3] + eps
        return m

    assert fixes_config(g(8), cfg, R.const)
    assert not fixes_config(g(1), cfg, R.const)


@pytest.mark.parametrize("p,cid,h0", [(0, "9A", 8), (0, "7B", 5), (2, "1T", 3), (0, "6A", 2), (3, "3K", 2), (2, "2N", 1)])
def test_h0_table_values(p, cid, h0):
    assert h0_vector_fields(case_config(p, cid)) == h0


def test_h0_of_empty_config():
    assert h0_vector_fields(BlowupConfig.from_json({"characteristic": 0, "towers": []})) == 8


def test_tangent_matrix_shape():
    rows = tangent_condition_matrix(case_config(0, "8A"))
    assert all(len(r) == 9 for r in rows)


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_h0_never_increases_along_lineages(p):
    pairs = lineage_pairs(corpus(p), p)
    assert pairs
    for parent, child in pairs:
        assert h0_vector_fields(case_config(p, child)) <= h0_vector_fields(case_config(p, parent)), (parent, child)


coord = st.integers(-4, 4)


@given(pts=st.lists(st.tuples(coord, coord, st.just(1)), min_size=0, max_size=3, unique=True))
def test_general_points(pts):
    data = {"characteristic": 0, "towers": [{"base": [str(c) for c in P]} for P in pts]}
    cfg = BlowupConfig.from_json(data)
    if len(pts) == 3:
        # general position: not collinear
        (a, b, _), (c, d, _), (e, f, _) = pts
        assume((c - a) * (f - b) - (d - b) * (e - a) != 0)
    assert agp_check(cfg).ok
    assert h0_vector_fields(cfg) == 8 - 2 * len(pts)
