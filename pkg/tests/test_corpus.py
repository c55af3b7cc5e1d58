import json

import pytest

from conftest import case_config, corpus, corpus_report
from delpezzo.cluster import BlowupConfig
from delpezzo.corpus import admits, all_records, corollary_check, load_corpus, run_case, static_rows
from delpezzo.vectorfields import NON_REDUCED, SMOOTH, StabFamily, family_point_count, stabilizer_point_count

INVARIANTS = ("ade", "lines", "h0", "smooth", "reduced_dim_estimate")
ONE_DIM = ["4A", "3A", "2A", "1A", "2N", "2R", "1J", "1L", "1Q"]


@pytest.mark.parametrize("p,n", [(0, 51), (2, 73), (3, 59), (5, 51)])
def test_corpus_sizes(p, n):
    assert len(load_corpus(p)) == n


def test_unsupported_characteristic():
    with pytest.raises(ValueError):
        load_corpus(7)


@pytest.mark.parametrize(
    "constraint,p,ok", [("any", 3, True), ("=2", 2, True), ("=2", 3, False), ("!=2,3", 3, False), ("!=2", 5, True)]
)
def test_admits(constraint, p, ok):
    assert admits(constraint, p) is ok


def test_case_outside_its_characteristic():
    with pytest.raises(ValueError):
        corpus(2)["1T"].config(3)


def test_run_case_9a():
    res = run_case(corpus(0)["9A"], 0)
    assert res.ok
    assert res.computed["ade"] == "∅" and res.computed["h0"] == 8 and res.computed["smooth"] == SMOOTH


def test_run_case_3k():
    c = run_case(corpus(3)["3K"], 3).computed
    assert (c["ade"], c["lines"], c["h0"], c["smooth"]) == ("A_5", 3, 2, NON_REDUCED)
    assert c["reduced_dim_estimate"] == 1


def test_run_case_2y():
    c = run_case(corpus(2)["2Y"], 2).computed
    assert (c["ade"], c["lines"], c["h0"], c["smooth"]) == ("E_7", 1, 3, SMOOTH)


def test_run_case_reports_diffs():
    rec = corpus(0)["5A"]
    wrong = rec.__class__(rec.id, rec.char_constraint, rec.towers, {**rec.expected, "lines": 6}, rec.table)
    res = run_case(wrong, 0)
    assert not res.ok and res.diffs == ["lines: computed 7, expected 6"]


def test_report_text_and_json():
    rep = corpus_report(2)
    text = rep.to_text()
    assert text.splitlines()[-1] == "p=2: 73/73 pass"
    data = json.loads(json.dumps(rep.to_json()))
    assert data["summary"] == {"cases": 73, "passed": 73, "undetermined": []}


@pytest.mark.parametrize("p,degrees", [(2, [1, 2, 3, 4]), (3, [1, 2, 3]), (5, [])])
def test_corollary(p, degrees):
    res = corollary_check(p, corpus_report(p))
    assert res.ok and res.degrees == degrees
    assert res.boundary_degree == (max(degrees) if degrees else None)


def test_corollary_rejects_char_zero():
    with pytest.raises(ValueError):
        corollary_check(0)


@pytest.mark.parametrize("cid", ONE_DIM)
def test_moduli_invariance(cid):
    p = 0 if any(r.id == cid for r in corpus(0)) else 2
    rec = corpus(p)[cid]
    alphas = rec.alpha_choices(p, 2)
    assert len(alphas) == 2 and alphas[0] != alphas[1]
    runs = [run_case(rec, p, alpha=a) for a in alphas]
    assert all(r.ok for r in runs)
    for key in INVARIANTS:
        assert runs[0].computed.get(key) == runs[1].computed.get(key), key


def test_one_dim_cases_are_the_alpha_cases():
    assert sorted(r.id for r in all_records() if r.expected["moduli"] == "1 dim") == sorted(ONE_DIM)
    assert sorted(r.id for r in all_records() if r.has_alpha) == sorted(ONE_DIM)


def test_degree_and_height():
    for rec in all_records():
        assert rec.degree == int(rec.id[:-1])
        assert 1 <= rec.height or rec.id == "9A"
    assert corpus(2)["1T"].height == 8


def test_static_rows_are_data_only():
    rows = static_rows()
    assert rows and all("id" in r for r in rows)


def test_corpus_configs_round_trip():
    for p in (0, 2, 3, 5):
        for rec in corpus(p):
            data = rec.config_json(p)
            assert BlowupConfig.from_json(json.loads(json.dumps(data))).to_json() == case_config(p, rec.id).to_json()
            assert rec.__class__.from_json(rec.to_json(), rec.table) == rec


def _stab_count(p, cid, q):
    counts = corpus_report(p)[cid].computed.get("point_counts", {})
    if str(q) in counts:
        return counts[str(q)]
    return stabilizer_point_count(case_config(p, cid), q)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_family_counts_divide_stabilizer_counts(p):
    for rec in corpus(p):
        cfg = case_config(p, rec.id)
        q = p * p if cfg.field.degree <= 2 else p ** cfg.field.degree
        fam = StabFamily.from_json(rec.expected["family"])
        if p == 5 and rec.id == "8A":
            # six free parameters over F_25 is past the enumeration limit
            q = 5
        n_fam, n_stab = family_point_count(fam, q), _stab_count(p, rec.id, q)
        assert n_fam > 0 and n_stab % n_fam == 0, (rec.id, q, n_stab, n_fam)
