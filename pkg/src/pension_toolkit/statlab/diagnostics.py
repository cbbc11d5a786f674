"""Residual diagnostics: normality, specification, linearity, heteroskedasticity, collinearity, influence."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from ..errors import DegenerateError, PreconditionError, SingularDesignError
from .ols import FittedModel, ols

ALPHA = 0.10


@dataclass(frozen=True)
class TestResult:
    __test__ = False

    name: str
    statistic: float
    p_value: float
    df: tuple[float, ...] = ()
    alpha: float = ALPHA

    @property
    def reject(self) -> bool:
        return self.p_value < self.alpha


def jarque_bera(residuals, alpha: float = ALPHA) -> TestResult:
    """``n/6 * (S^2 + (K - 3)^2 / 4)`` with moment-based skewness and kurtosis."""
    e = np.asarray(residuals, dtype=float)
    n = len(e)
    if n < 3:
        raise PreconditionError("Jarque-Bera needs at least 3 residuals")
    c = e - e.mean()
    m2 = float(np.mean(c**2))
    if m2 <= 1e-300:
        raise DegenerateError("residuals have zero variance")
    skew = float(np.mean(c**3)) / m2**1.5
    kurt = float(np.mean(c**4)) / m2**2
    jb = n / 6 * (skew**2 + (kurt - 3) ** 2 / 4)
    return TestResult("jarque_bera", jb, float(stats.chi2.sf(jb, 2)), (2,), alpha)


def _f_test(name, rss_restricted, rss_full, df_num, df_den, alpha):
    if rss_full <= 0:
        stat = math.inf if rss_restricted > 0 else 0.0
    else:
        stat = max(((rss_restricted - rss_full) / df_num) / (rss_full / df_den), 0.0)
    return TestResult(name, stat, float(stats.f.sf(stat, df_num, df_den)), (df_num, df_den), alpha)


def reset_test(model: FittedModel, powers: Sequence[int] = (2, 3), alpha: float = ALPHA) -> TestResult:
    """Ramsey RESET: F test on powers of the fitted values added to the design."""
    n, k = model.X.shape
    q = len(powers)
    if n <= k + q:
        raise PreconditionError(f"RESET needs more than {k + q} observations, got {n}")
    f = model.fitted
    sd = f.std()
    if sd == 0:
        raise SingularDesignError("fitted values are constant; RESET terms are collinear")
    # fitted values are in the column space of X, so standardizing them
    # leaves the augmented column space unchanged
    z = (f - f.mean()) / sd
    aug = np.column_stack([model.X, *(z**p for p in powers)])
    full = ols(aug, model.y)
    return _f_test("reset", model.rss, full.rss, q, n - k - q, alpha)


def rainbow_test(model: FittedModel, central_fraction: float = 0.5, alpha: float = ALPHA) -> TestResult:
    """Utts' Rainbow test, keeping the lowest-leverage fraction as the central subset."""
    n, k = model.X.shape
    m = int(math.floor(central_fraction * n))
    if n <= 2 * k or m <= k or m >= n:
        raise PreconditionError(f"Rainbow central subset of {m} points is too small for {k} parameters")
    h = leverage(model.X)
    central = np.argsort(h, kind="stable")[:m]
    sub = ols(model.X[central], model.y[central])
    return _f_test("rainbow", model.rss, sub.rss, n - m, m - k, alpha)


def koenker_test(model: FittedModel, alpha: float = ALPHA) -> TestResult:
    """Studentized Breusch-Pagan: ``n R^2`` of squared residuals on the regressors."""
    n, k = model.X.shape
    if n <= k + 1:
        raise PreconditionError(f"Koenker test needs more than {k + 1} observations")
    e2 = model.residuals**2
    aux = ols(model.X, e2)
    df = k - 1 if model.has_const else k
    if df < 1:
        raise DegenerateError("auxiliary regression has no non-constant regressors")
    lm = n * aux.r2
    return TestResult("koenker", lm, float(stats.chi2.sf(lm, df)), (df,), alpha)


def vif(X, names: Sequence[str] | None = None) -> dict[str, float]:
    """Variance inflation factor of every non-constant column.

    A column explained exactly by the others gets ``inf``.
    """
    X = np.asarray(X, dtype=float)
    names = list(names) if names is not None else [f"x{j}" for j in range(X.shape[1])]
    const = [j for j in range(X.shape[1]) if np.all(X[:, j] == 1.0)]
    others = [j for j in range(X.shape[1]) if j not in const]
    if len(others) < 2:
        raise PreconditionError("VIF needs at least two non-constant columns")
    out = {}
    for j in others:
        rest = const + [c for c in others if c != j]
        A = X[:, rest] if rest else np.ones((len(X), 1))
        beta, *_ = np.linalg.lstsq(A, X[:, j], rcond=None)
        resid = X[:, j] - A @ beta
        centered = X[:, j] - X[:, j].mean() if const else X[:, j]
        tss = float(centered @ centered)
        r2 = 1.0 - float(resid @ resid) / tss if tss > 0 else 1.0
        out[names[j]] = math.inf if r2 >= 1 - 1e-12 else 1.0 / (1.0 - r2)
    return out


def leverage(X) -> np.ndarray:
    """Diagonal of the hat matrix."""
    q, _ = np.linalg.qr(np.asarray(X, dtype=float))
    return np.sum(q**2, axis=1)


@dataclass(frozen=True)
class Influence:
    leverage: np.ndarray
    student_resid: np.ndarray
    cooks_d: np.ndarray
    high_leverage: np.ndarray
    outlier: np.ndarray
    influential: np.ndarray


def influence(model: FittedModel) -> Influence:
    """Leverage, externally studentized residuals and Cook's distance.

    Flags: leverage above ``2k/n``, ``|t| > 2`` and Cook's distance above
    ``4/n``.
    """
    n, k = model.X.shape
    h = leverage(model.X)
    e = model.residuals
    with np.errstate(divide="ignore", invalid="ignore"):
        one_minus_h = np.where(h < 1 - 1e-12, 1 - h, 0.0)
        if n - k - 1 > 0:
            s2_i = (model.rss - e**2 / one_minus_h) / (n - k - 1)
            t = e / np.sqrt(s2_i * one_minus_h)
            cooks = e**2 * h / (k * model.sigma2 * one_minus_h**2)
        else:
            t = np.full(n, math.nan)
            cooks = np.full(n, math.nan)
    t = np.where(one_minus_h > 0, t, math.nan)
    cooks = np.where(one_minus_h > 0, cooks, math.nan)
    return Influence(
        leverage=h,
        student_resid=t,
        cooks_d=cooks,
        high_leverage=h > 2 * k / n,
        outlier=np.abs(np.nan_to_num(t)) > 2,
        influential=np.nan_to_num(cooks) > 4 / n,
    )


def plot_data(model: FittedModel) -> dict[str, dict[str, np.ndarray]]:
    """Point sets for residuals-vs-fitted, normal Q-Q, scale-location and residuals-vs-leverage."""
    n, k = model.X.shape
    h = leverage(model.X)
    s = math.sqrt(model.sigma2) if n > k else math.nan
    with np.errstate(divide="ignore", invalid="ignore"):
        std_resid = model.residuals / (s * np.sqrt(1 - h))
    order = np.argsort(std_resid, kind="stable")
    theo = stats.norm.ppf((np.arange(1, n + 1) - 0.375) / (n + 0.25))
    qq_theo = np.empty(n)
    qq_theo[order] = theo
    return {
        "residuals_fitted": {"fitted": model.fitted, "residual": model.residuals},
        "qq": {"theoretical": qq_theo, "std_residual": std_resid},
        "scale_location": {"fitted": model.fitted, "sqrt_abs_std_residual": np.sqrt(np.abs(std_resid))},
        "residuals_leverage": {"leverage": h, "std_residual": std_resid, "cooks_d": influence(model).cooks_d},
    }
