import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hhexp import EstimatorKind, PopulationParams, efficiency, theory
from hhexp.errors import ZeroCV, ZeroMSE

from conftest import random_params

K = EstimatorKind

# (ER_Y, EP_Y, ER_XY, EP_XY), rounded to 1e-6, from the independent oracle
ORACLE_PRE = {
    (0.1, 1.5): (137.230406, 74.696872, 139.28188, 73.930794),
    (0.1, 2.0): (135.048626, 75.52614, 138.900557, 74.041969),
    (0.1, 2.5): (133.108404, 76.302776, 138.552782, 74.144191),
    (0.1, 3.0): (131.371728, 77.031638, 138.234314, 74.238499),
    (0.2, 1.5): (135.048626, 75.52614, 138.900557, 74.041969),
    (0.2, 2.0): (131.371728, 77.031638, 138.234314, 74.238499),
    (0.2, 2.5): (128.393055, 78.36265, 137.671633, 74.406787),
    (0.2, 3.0): (125.93097, 79.547848, 137.190107, 74.552512),
    (0.3, 1.5): (133.108404, 76.302776, 138.552782, 74.144191),
    (0.3, 2.0): (128.393055, 78.36265, 137.671633, 74.406787),
    (0.3, 2.5): (124.853397, 80.093055, 136.974482, 74.618286),
    (0.3, 3.0): (122.098463, 81.567184, 136.409145, 74.79228),
}
KINDS4 = (K.ER_Y, K.EP_Y, K.ER_XY, K.EP_XY)


def test_condition_er_y_literature(lit):
    r = efficiency.condition_er_y(lit, 35, 2.0)
    assert r.intermediates["threshold"] == pytest.approx(0.09397, abs=1e-5)
    assert r.algebraic_holds and r.direct_holds and r.agree


def test_condition_er_y_uncorrelated(lit):
    p = PopulationParams.from_moments(95, 24, 19.5, 55.86, 3.04, 3.2735, 0.0, 2.3552, 2.51, 1.0)
    r = efficiency.condition_er_y(p, 35, 2.0)
    expected = (1 / 35 - 1 / 95) * 19.5 ** 2 * p.cv_x ** 2 / 4
    assert not r.algebraic_holds
    assert r.mse_difference == pytest.approx(expected, rel=1e-12)
    assert r.mse_difference > 0


def test_condition_constant_x_is_boundary(lit):
    p = PopulationParams.from_moments(95, 24, 19.5, 55.86, 3.04, 0.0, 0.0, 2.3552, 0.0, 0.0)
    for cond in (efficiency.condition_er_y, efficiency.condition_ep_y,
                 efficiency.condition_er_xy, efficiency.condition_ep_xy):
        r = cond(p, 35, 2.0)
        assert r.mse_difference == pytest.approx(0.0, abs=1e-15)


def test_condition_ep_y_literature(lit):
    r = efficiency.condition_ep_y(lit, 35, 2.0)
    assert not r.algebraic_holds and not r.direct_holds


def test_condition_ep_y_extreme_negative_correlation(lit):
    p = PopulationParams.from_moments(95, 24, 19.5, 55.86, 3.04, 3.2735, -3.04 * 3.2735,
                                      2.3552, 2.51, -2.3552 * 2.51)
    r = efficiency.condition_ep_y(p, 35, 2.0)
    assert r.intermediates["threshold"] <= 1
    assert r.algebraic_holds and r.direct_holds


def test_zero_cv_y(lit):
    p = dataclasses.replace(lit, cv_y=0.0)
    with pytest.raises(ZeroCV):
        efficiency.condition_er_y(p, 35)


def test_condition_xy_at_f_one_reduces_to_er_y(lit):
    r_xy = efficiency.condition_er_xy(lit, 35, 1.0)
    r_y = efficiency.condition_er_y(lit, 35, 1.0)
    assert r_xy.algebraic_holds == (r_xy.intermediates["alpha"] <= 0)
    assert r_xy.mse_difference == pytest.approx(r_y.mse_difference, rel=1e-12)


def test_condition_xy_literature(lit):
    for cond, holds in ((efficiency.condition_er_xy, True), (efficiency.condition_ep_xy, False)):
        r = cond(lit, 35, 2.0, 24 / 95)
        mse_diff = (theory.mse(lit, 35, 2.0, 24 / 95, r.estimator)
                    - theory.var_hh(lit, 35, 2.0, 24 / 95))
        assert r.mse_difference == pytest.approx(mse_diff, rel=1e-15)
        assert r.direct_holds is holds and r.agree


def test_condition_xy_intermediates(lit):
    r = efficiency.condition_ep_xy(lit, 35, 2.0)
    assert set(r.intermediates) == {"lambda", "lambda_prime"}
    r = efficiency.condition_er_xy(lit, 35, 2.0)
    cx2, cy2 = 2.51 / 55.86, 2.3552 / 19.5
    assert r.intermediates["alpha_prime"] == pytest.approx(cx2 ** 2 / 4 - 0.729 * cx2 * cy2, rel=1e-12)


def test_condition_xy_zero_alphas(lit):
    # choose covariances so that alpha = alpha' = 0
    cx, cx2 = 3.2735 / 55.86, 2.51 / 55.86
    s_xy = cx ** 2 / 4 * 19.5 * 55.86
    s_xy2 = cx2 ** 2 / 4 * 19.5 * 55.86
    p = PopulationParams.from_moments(95, 24, 19.5, 55.86, 3.04, 3.2735, s_xy, 2.3552, 2.51, s_xy2)
    r = efficiency.condition_er_xy(p, 35, 2.0)
    assert r.mse_difference == pytest.approx(0.0, abs=1e-15)
    assert r.ratio_form_valid is False


@settings(max_examples=500)
@given(st.integers(0, 2 ** 32 - 1))
def test_conditions_agree_with_direct_comparison(seed):
    p, n, f, w = random_params(np.random.default_rng(seed))
    for r in efficiency.conditions(p, n, f, w):
        assert r.agree, r
        assert r.direct_holds == (r.mse_difference <= 0)
        if r.ratio_form_valid:
            assert r.ratio_form_holds == r.algebraic_holds


def test_pre_hh_is_exactly_100(lit):
    for w in (0.0, 0.1, 0.3):
        for f in (1.0, 2.0):
            assert efficiency.pre(lit, 35, f, w, K.HH) == 100.0


def test_pre_constant_x_is_100(lit):
    p = PopulationParams.from_moments(95, 24, 19.5, 55.86, 3.04, 0.0, 0.0, 2.3552, 0.0, 0.0)
    for k in KINDS4:
        assert efficiency.pre(p, 35, 2.0, 0.2, k) == pytest.approx(100.0, rel=1e-13)


def test_pre_zero_mse():
    # y = x exactly, means equal: MSE of the ratio estimator vanishes at first order
    p = PopulationParams.from_moments(100, 10, 10.0, 10.0, 2.0, 4.0, 8.0)
    assert theory.mse_er_y(p, 10, 1.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    p = PopulationParams.from_moments(100, 10, 10.0, 10.0, 2.0, 4.0, 8.0 + 1e-12)
    with pytest.raises(ZeroMSE):
        efficiency.pre(p, 10, 1.0, 0.0, K.ER_Y)


@pytest.mark.parametrize("cell", sorted(ORACLE_PRE))
def test_pre_literature_grid(lit, cell):
    w, f = cell
    for k, expected in zip(KINDS4, ORACLE_PRE[cell]):
        assert efficiency.pre(lit, 35, f, w, k) == pytest.approx(expected, abs=1e-6)


def test_pre_table_shape_and_references(lit):
    t = efficiency.pre_table(lit, 35, efficiency.PUBLISHED_W, efficiency.PUBLISHED_F)
    assert len(t.rows) == 12
    assert all(set(r.pre) == set(efficiency.TABLE_KINDS) for r in t.rows)
    assert all(r.pre[K.HH] == 100.0 for r in t.rows)
    cell = t.cell(0.10, 1.50)
    assert cell.published[K.ER_Y] == 263.64
    assert cell.delta[K.ER_Y] == pytest.approx(ORACLE_PRE[(0.1, 1.5)][0] - 263.64, abs=1e-6)
    assert t.cell(0.30, 3.00).published[K.ER_Y] == 263.46


def test_pre_table_off_grid_has_no_reference(lit):
    t = efficiency.pre_table(lit, 35, [0.0], [2.0])
    row = t.rows[0]
    assert row.published == {}
    # w = 0: every PRE comes from the complete-response brackets alone
    assert row.pre[K.ER_Y] == pytest.approx(100 * theory.var_hh(lit, 35, 1.0) / theory.mse_er_y(lit, 35, 1.0))
    assert row.pre[K.ER_XY] == pytest.approx(row.pre[K.ER_Y], rel=1e-14)
    recs = t.records()
    assert all(r["published"] is None and r["delta"] is None for r in recs)


def test_pre_table_empty_lists(lit):
    with pytest.raises(ValueError):
        efficiency.pre_table(lit, 35, [], [1.0])


def test_pre_table_csv_and_text(lit):
    t = efficiency.pre_table(lit, 35, efficiency.PUBLISHED_W, efficiency.PUBLISHED_F)
    lines = t.to_csv().splitlines()
    assert lines[0] == "w,f,kind,pre,published,delta"
    assert len(lines) == 1 + 12 * 5
    text = t.to_text().splitlines()
    assert len(text) == 2 + 12
    assert "263.64" in text[2] and "137.23" in text[2]


def test_replication_report(lit):
    rep = efficiency.replication_report()
    assert rep["n"] == 35 and len(rep["grid"]) == 60
    assert all(v for v in rep["verdicts"].values())
    assert rep["consistency"]["consistent"]
    assert len(rep["conditions"]) == 4
    ep = [g for g in rep["grid"] if g["kind"] == "EP_Y"]
    assert all(g["pre"] < 100 for g in ep)
    cell = next(g for g in rep["grid"] if (g["w"], g["f"], g["kind"]) == (0.3, 3.0, "ER_Y"))
    assert cell["published"] == 263.46
    assert cell["delta"] == pytest.approx(122.098463 - 263.46, abs=1e-6)
