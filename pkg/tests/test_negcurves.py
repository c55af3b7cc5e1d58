import itertools
import re

import pytest

from conftest import case_config, corpus
from delpezzo.cluster import BlowupConfig
from delpezzo.negcurves import (
    LatticeError,
    NegCurveSet,
    PicClass,
    ade_type,
    canonical_class,
    dual_graph_dot,
    effective_negative,
    enum_exceptional,
    enum_roots,
    geometric_low_degree,
    lattice_low_degree,
)

# frozen from the Weyl-orbit oracle below
ROOT_COUNTS = (0, 0, 2, 8, 20, 40, 72, 126, 240)
EXCEPTIONAL_COUNTS = (0, 1, 3, 6, 10, 16, 27, 56, 240)


def _simple_roots(n):
    out = []
    for i in range(n - 1):
        m = [0] * n
        m[i], m[i + 1] = -1, 1
        out.append((0, tuple(m)))
    if n >= 3:
        out.append((1, (1, 1, 1) + (0,) * (n - 3)))
    return [PicClass(d, m) for d, m in out]


def _weyl_closure(seeds, simple):
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        x = todo.pop()
        for a in simple:
            # reflection in a root of square -2
            k = x.dot(a)
            y = PicClass(x.d + k * a.d, tuple(xi + k * ai for xi, ai in zip(x.m, a.m)))
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def oracle_roots(n):
    simple = _simple_roots(n)
    return _weyl_closure(simple + [PicClass(-r.d, tuple(-x for x in r.m)) for r in simple], simple)


def oracle_exceptional(n):
    simple = _simple_roots(n)
    seeds = []
    for i in range(n):
        seeds.append(PicClass(0, tuple(-int(j == i) for j in range(n))))
    for i, j in itertools.combinations(range(n), 2):
        seeds.append(PicClass(1, tuple(int(k in (i, j)) for k in range(n))))
    return _weyl_closure(seeds, simple)


@pytest.mark.parametrize("n", range(9))
def test_weyl_oracle_agrees_with_frozen_counts(n):
    assert len(oracle_roots(n)) == ROOT_COUNTS[n]
    assert len(oracle_exceptional(n)) == EXCEPTIONAL_COUNTS[n]


@pytest.mark.parametrize("n", range(9))
def test_enumeration_matches_frozen_counts(n):
    roots, exc = enum_roots(n), enum_exceptional(n)
    assert len(roots) == ROOT_COUNTS[n]
    assert len(exc) == EXCEPTIONAL_COUNTS[n]
    assert set(roots) == oracle_roots(n)
    assert set(exc) == oracle_exceptional(n)


@pytest.mark.parametrize("n", range(9))
def test_defining_conditions(n):
    K = canonical_class(n)
    for c in enum_roots(n):
        assert c.square() == -2 and c.dot(K) == 0
    for c in enum_exceptional(n):
        assert c.square() == -1 and c.dot(K) == -1


def test_small_cases():
    assert enum_roots(1) == ()
    assert enum_exceptional(1) == (PicClass(0, (-1,)),)
    with pytest.raises(LatticeError):
        enum_roots(9)


def test_pairing_needs_same_lattice():
    with pytest.raises(LatticeError):
        PicClass(1, (1,)).dot(PicClass(1, (1, 1)))


# ADE types ---------------------------------------------------------------------------


@pytest.mark.parametrize("n,expected", [(4, "A_4"), (5, "D_5"), (6, "E_6"), (7, "E_7"), (8, "E_8")])
def test_ade_of_simple_systems(n, expected):
    assert ade_type(_simple_roots(n)) == expected


def test_ade_of_disjoint_pieces():
    # E1-E2, E3-E4, E5-E6 are pairwise orthogonal
    roots = [PicClass(0, (1, -1, 0, 0, 0, 0)), PicClass(0, (0, 0, 1, -1, 0, 0)), PicClass(0, (0, 0, 0, 0, 1, -1))]
    assert ade_type(roots) == "3A_1"
    assert ade_type(NegCurveSet([], [])) == "∅"


@pytest.mark.parametrize(
    "p,cid,ade,lines",
    [(0, "5A", "A_1", 7), (0, "3H", "3A_2", 3), (0, "1D", "E_8", 1), (0, "4K", "A_3+2A_1", 2), (0, "9A", "∅", 0)],
)
def test_table_rows(p, cid, ade, lines):
    neg = effective_negative(case_config(p, cid))
    assert ade_type(neg) == ade
    assert len(neg.exceptional) == lines


def test_projective_plane_has_no_negative_curves():
    neg = effective_negative(BlowupConfig.from_json({"characteristic": 0, "towers": []}))
    assert neg.classes == []


def test_27_lines_on_a_general_cubic():
    pts = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"], ["1", "1", "1"], ["1", "2", "3"], ["1", "3", "-2"]]
    cfg = BlowupConfig.from_json({"characteristic": 0, "towers": [{"base": b} for b in pts]})
    neg = effective_negative(cfg)
    assert neg.roots == [] and len(neg.exceptional) == 27


# dual graphs ---------------------------------------------------------------------


def _nodes_edges(dot):
    nodes = re.findall(r"^\s+([RL]\d+) \[", dot, re.M)
    edges = re.findall(r"^\s+[RL]\d+ -- [RL]\d+", dot, re.M)
    return nodes, edges


def test_dot_of_empty_set():
    nodes, edges = _nodes_edges(dual_graph_dot(NegCurveSet([], [])))
    assert nodes == [] and edges == []


def test_dot_of_one_line():
    dot = dual_graph_dot(effective_negative(case_config(0, "8A")))
    nodes, edges = _nodes_edges(dot)
    assert nodes == ["L0"] and edges == []
    assert "style=solid" in dot


def test_dot_of_5a():
    neg = effective_negative(case_config(0, "5A"))
    nodes, edges = _nodes_edges(dual_graph_dot(neg))
    assert len(nodes) == 8
    pairs = sum(1 for a, b in itertools.combinations(neg.classes, 2) if a.dot(b) > 0)
    assert len(edges) == pairs


def test_dot_of_3h():
    dot = dual_graph_dot(effective_negative(case_config(0, "3H")))
    assert dot.count("fillcolor=black") == 6
    assert len(_nodes_edges(dot)[0]) == 9


# corpus-wide properties -----------------------------------------------------------------


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_intersection_matrix(p):
    for rec in corpus(p):
        neg = effective_negative(case_config(p, rec.id))
        cls = neg.classes
        for i, a in enumerate(cls):
            for j, b in enumerate(cls):
                assert neg.matrix[i][j] == a.dot(b)
                if i != j:
                    assert neg.matrix[i][j] >= 0
        assert neg.nonmonotone == []


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_geometric_and_lattice_low_degree_agree(p):
    for rec in corpus(p):
        cfg = case_config(p, rec.id)
        neg = effective_negative(cfg)
        assert geometric_low_degree(cfg) == lattice_low_degree(neg), rec.id
