import pytest
from hypothesis import given, strategies as st

from conftest import case_config
from delpezzo.cluster import BlowupConfig
from delpezzo.vectorfields import (
    NON_REDUCED,
    SMOOTH,
    UNDETERMINED,
    StabilizerReport,
    fallback_qs,
    fit_counts,
    reduced_dim_estimate,
    smoothness_verdict,
)
from delpezzo.vectorfields.estimate import RESIDUAL_GUARD, _model


def test_empty_config_has_dimension_eight():
    cfg = BlowupConfig.from_json({"characteristic": 2, "towers": []})
    assert reduced_dim_estimate(cfg, (2, 4)).dim == 8


def test_6a_dimension_two():
    assert reduced_dim_estimate(case_config(5, "6A"), (5, 25)).dim == 2


def test_3k_dimension_one():
    fit = reduced_dim_estimate(case_config(3, "3K"), (9, 27))
    assert fit.dim == 1 and not fit.flagged


def test_verdict_5a_char5():
    rep = smoothness_verdict(case_config(5, "5A"))
    assert (rep.h0, rep.reduced_dim_estimate, rep.smooth) == (1, 1, SMOOTH)


def test_verdict_2n_char2():
    rep = smoothness_verdict(case_config(2, "2N"))
    assert (rep.h0, rep.reduced_dim_estimate, rep.smooth) == (1, 0, NON_REDUCED)


def test_verdict_9a_char0():
    rep = smoothness_verdict(case_config(0, "9A"))
    assert (rep.h0, rep.smooth) == (8, SMOOTH)
    assert rep.reduced_dim_estimate is None


def test_skip_counts_is_undetermined():
    rep = smoothness_verdict(case_config(2, "5A"), skip_counts=True)
    assert rep.smooth == UNDETERMINED and not rep.point_counts


def test_counts_are_reused():
    rep = smoothness_verdict(case_config(2, "5A"), counts={4: 3, 8: 7})
    assert rep.point_counts == {4: 3, 8: 7} and rep.reduced_dim_estimate == 1


# the fit ------------------------------------------------------------------------------------


def test_fit_recovers_pgl3():
    from delpezzo.vectorfields.pointcount import pgl3_order

    fit = fit_counts({4: pgl3_order(4), 8: pgl3_order(8)})
    assert fit.dim == 8 and fit.residual == 0 and fit.components == 1


def test_naive_slope_is_biased_at_small_q():
    # a one-dimensional torus: q - 1 points
    fit = fit_counts({2: 1, 4: 3})
    assert fit.dim == 1 and fit.naive == 2


@given(
    u=st.integers(0, 3),
    r1=st.integers(0, 3),
    r2=st.integers(0, 1),
    c=st.sampled_from([1, 2, 3, 4, 6]),
    qs=st.sampled_from([(4, 8), (9, 27), (5, 25), (8, 16)]),
)
def test_exact_models_fit_with_zero_residual(u, r1, r2, c, qs):
    red = (1,) * r1 + (2,) * r2
    counts = {q: c * _model(q, u, red) for q in qs}
    fit = fit_counts(counts)
    assert fit.residual < 1e-9
    # the chosen shape reproduces both counts, even when another shape was picked
    u_fit = fit.dim - sum(fit.degrees)
    for q in qs:
        assert abs(fit.components * _model(q, u_fit, fit.degrees) - counts[q]) < 1e-6 * counts[q]


@pytest.mark.parametrize(
    "counts,dim",
    [({4: 3, 8: 7}, 1), ({9: 8, 27: 26}, 1), ({4: 12, 8: 56}, 2), ({4: 1, 16: 1}, 0), ({9: 648, 27: 18252}, 3)],
)
def test_known_shapes(counts, dim):
    assert fit_counts(counts).dim == dim


def test_fit_errors():
    with pytest.raises(ValueError):
        fit_counts({4: 3})
    with pytest.raises(ValueError):
        fit_counts({4: 0, 8: 7})
    with pytest.raises(ValueError):
        fit_counts({4: 3, 9: 8})


def test_parity_dependent_components_are_flagged():
    # 1M in characteristic 2: an etale mu_3 has 3 points over F_4, 1 over F_8
    fit = fit_counts({4: 3, 8: 1})
    assert fit.flagged and fit.residual > RESIDUAL_GUARD
    assert not fit_counts({2: 1, 8: 1}).flagged


def test_fallback_pair():
    assert fallback_qs(case_config(2, "1M")) == (2, 8)
    assert fallback_qs(case_config(3, "1H")) == (3, 27)
    assert fallback_qs(case_config(5, "3F")) == (5, 125)
    assert fallback_qs(case_config(2, "2N")) is None
    assert fallback_qs(case_config(0, "5A")) is None


@pytest.mark.parametrize("cid,verdict", [("1M", NON_REDUCED), ("1S", SMOOTH), ("3F", SMOOTH), ("2R", SMOOTH)])
def test_fallback_resolves_parity_cases(cid, verdict):
    rep = smoothness_verdict(case_config(2, cid))
    assert rep.primary_fit.flagged
    assert rep.used_fallback and rep.fit_qs == (2, 8)
    assert rep.smooth == verdict
    assert not rep.fit.flagged
    assert smoothness_verdict(case_config(2, cid), fallback=False).smooth == UNDETERMINED


def test_report_rejects_dimension_above_h0():
    with pytest.raises(ValueError):
        StabilizerReport(1, 2, SMOOTH)
    StabilizerReport(1, 2, UNDETERMINED)


def test_report_json():
    rep = smoothness_verdict(case_config(2, "1M"))
    data = rep.to_json()
    assert data["smooth"] == NON_REDUCED
    assert data["fit"]["qs"] == [2, 8]
    assert data["primary_fit"]["qs"] == [4, 8]
    assert set(data["point_counts"]) == {"2", "4", "8"}
