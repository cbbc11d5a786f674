import numpy as np
import pytest
from scipy import stats

from pension_toolkit.errors import DegenerateError, PreconditionError
from pension_toolkit.statlab import (
    influence,
    jarque_bera,
    koenker_test,
    leverage,
    ols,
    plot_data,
    rainbow_test,
    reset_test,
    vif,
)

sm = pytest.importorskip("statsmodels.api")
from statsmodels.stats import diagnostic as smd  # noqa: E402
from statsmodels.stats.outliers_influence import OLSInfluence, variance_inflation_factor  # noqa: E402


def _model(seed=0, n=80, hetero=False, curve=False):
    rng = np.random.default_rng(seed)
    x1, x2 = rng.uniform(0, 4, n), rng.normal(size=n)
    X = np.column_stack([np.ones(n), x1, x2])
    noise = rng.normal(0, 1, n) * (1 + 2 * x1 if hetero else 1)
    y = 1 + 0.5 * x1 - x2 + (0.8 * x1**2 if curve else 0) + noise
    return ols(X, y, ["const", "x1", "x2"]), X, y


def test_jb_hand_fixture():
    res = jarque_bera([-1.0, 0.0, 1.0])
    assert res.statistic == pytest.approx(0.28125, abs=1e-9)
    assert res.p_value == pytest.approx(np.exp(-0.28125 / 2))


def test_jb_matches_scipy():
    e = np.random.default_rng(3).standard_t(5, 150)
    ref = stats.jarque_bera(e)
    res = jarque_bera(e)
    assert res.statistic == pytest.approx(ref.statistic, rel=1e-10)
    assert res.p_value == pytest.approx(ref.pvalue, rel=1e-8)


def test_jb_preconditions():
    with pytest.raises(PreconditionError):
        jarque_bera([1.0, 2.0])
    with pytest.raises(DegenerateError):
        jarque_bera([2.0, 2.0, 2.0, 2.0])


def test_reset_matches_statsmodels():
    m, X, y = _model(1, curve=True)
    ref = smd.linear_reset(sm.OLS(y, X).fit(), power=3, use_f=True)
    res = reset_test(m)
    assert res.statistic == pytest.approx(float(ref.fvalue), rel=1e-7)
    assert res.p_value == pytest.approx(float(ref.pvalue), rel=1e-6)
    assert res.reject


def test_koenker_matches_statsmodels():
    m, X, y = _model(2, hetero=True)
    lm, lm_p, *_ = smd.het_breuschpagan(m.residuals, X, robust=True)
    res = koenker_test(m)
    assert res.statistic == pytest.approx(lm, rel=1e-9)
    assert res.p_value == pytest.approx(lm_p, rel=1e-7)
    assert res.df == (2,)
    assert res.reject


def test_rainbow_against_direct_computation():
    m, X, y = _model(4, curve=True)
    n, k = X.shape
    h = np.diag(X @ np.linalg.inv(X.T @ X) @ X.T)
    keep = np.argsort(h, kind="stable")[: n // 2]
    beta, *_ = np.linalg.lstsq(X[keep], y[keep], rcond=None)
    rss_c = float(np.sum((y[keep] - X[keep] @ beta) ** 2))
    f = ((m.rss - rss_c) / (n - n // 2)) / (rss_c / (n // 2 - k))
    res = rainbow_test(m)
    assert res.statistic == pytest.approx(f, rel=1e-9)
    assert res.p_value == pytest.approx(stats.f.sf(f, n - n // 2, n // 2 - k), rel=1e-8)


def test_vif_matches_statsmodels():
    rng = np.random.default_rng(5)
    a = rng.normal(size=50)
    b = a + rng.normal(0, 0.5, 50)
    c = rng.normal(size=50)
    X = np.column_stack([np.ones(50), a, b, c])
    out = vif(X, ["const", "a", "b", "c"])
    for j, name in enumerate(["a", "b", "c"], start=1):
        assert out[name] == pytest.approx(variance_inflation_factor(X, j), rel=1e-9)
    assert out["a"] > 4 and out["c"] < 1.5


def test_vif_perfect_collinearity_and_precondition():
    rng = np.random.default_rng(6)
    a, c = rng.normal(size=20), rng.normal(size=20)
    X = np.column_stack([np.ones(20), a, 3 * a - 1, c])
    assert vif(X)["x1"] == np.inf
    with pytest.raises(PreconditionError):
        vif(np.column_stack([np.ones(20), a]))


def test_influence_matches_statsmodels():
    m, X, y = _model(7)
    ref = OLSInfluence(sm.OLS(y, X).fit())
    inf = influence(m)
    assert np.allclose(inf.leverage, ref.hat_matrix_diag, rtol=1e-10)
    assert np.allclose(inf.student_resid, ref.resid_studentized_external, rtol=1e-8)
    assert np.allclose(inf.cooks_d, ref.cooks_distance[0], rtol=1e-8)
    n, k = X.shape
    assert np.array_equal(inf.high_leverage, inf.leverage > 2 * k / n)
    assert leverage(X).sum() == pytest.approx(k)


def test_plot_data_panels():
    m, X, _ = _model(8)
    panels = plot_data(m)
    assert set(panels) == {"residuals_fitted", "qq", "scale_location", "residuals_leverage"}
    qq = panels["qq"]
    order = np.argsort(qq["std_residual"])
    assert np.all(np.diff(qq["theoretical"][order]) > 0)
    assert all(len(v) == len(X) for p in panels.values() for v in p.values())


def test_tests_accept_well_specified_model():
    m, *_ = _model(9, n=400)
    for t in (reset_test, rainbow_test, koenker_test):
        assert 0 <= t(m).p_value <= 1
    assert jarque_bera(m.residuals).p_value > 0.001
