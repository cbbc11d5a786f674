"""Least-squares fits of beneficiary ratios on regional indicators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from ..core_types import EconomicRow
from ..errors import DomainError, SingularDesignError
from .transforms import FAMILIES, estimate_lambda, log_jacobian, transform

REGRESSORS = ("hdi", "income_pc", "le_birth", "density")
RESPONSES = {"total": "bnf_total", "elderly": "bnf_elderly", "disabled": "bnf_disabled"}
# beneficiaries per 1,000 inhabitants
DEFAULT_RATIO_SCALE = 1000.0


@dataclass(frozen=True)
class Transform:
    family: str = "none"
    lam: float | None = None  # None means estimate by maximum likelihood

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"transform family must be one of {FAMILIES}")
        if self.lam is not None and not math.isfinite(self.lam):
            raise ValueError("lambda must be finite")


@dataclass(frozen=True)
class DesignSpec:
    response: str
    linear: tuple[str, ...] = ()
    quadratic: tuple[str, ...] = ()
    transform: Transform = Transform()
    label: str = ""

    def __post_init__(self):
        if self.response not in RESPONSES:
            raise ValueError(f"response must be one of {tuple(RESPONSES)}")
        if not (self.linear or self.quadratic):
            raise ValueError("a design needs at least one regressor")
        for name in (*self.linear, *self.quadratic):
            if name not in REGRESSORS:
                raise ValueError(f"unknown regressor {name!r}")

    @property
    def name(self) -> str:
        return self.label or f"{self.response}:{'+'.join(self.term_names())}:{self.transform.family}"

    def term_names(self) -> list[str]:
        return [*self.linear, *(f"{q}^2" for q in self.quadratic)]


def economic_frame(rows: Sequence[EconomicRow], ratio_scale: float = DEFAULT_RATIO_SCALE) -> dict[str, np.ndarray]:
    """Columns of the regional data plus the three beneficiary ratios."""
    rows = sorted(rows, key=lambda r: r.uf)
    frame = {"uf": np.array([r.uf for r in rows])}
    for name in REGRESSORS:
        frame[name] = np.array([getattr(r, name) for r in rows], dtype=float)
    pop = np.array([r.population for r in rows], dtype=float)
    for resp, attr in RESPONSES.items():
        frame[resp] = ratio_scale * np.array([getattr(r, attr) for r in rows], dtype=float) / pop
    return frame


def design_matrix(spec: DesignSpec, frame: Mapping[str, np.ndarray]) -> tuple[np.ndarray, list[str]]:
    n = len(frame[spec.response])
    cols = [np.ones(n)]
    cols += [np.asarray(frame[name], dtype=float) for name in spec.linear]
    cols += [np.asarray(frame[name], dtype=float) ** 2 for name in spec.quadratic]
    return np.column_stack(cols), ["const", *spec.term_names()]


@dataclass
class FittedModel:
    names: list[str]
    coef: np.ndarray
    X: np.ndarray
    y: np.ndarray  # response on the transformed scale
    fitted: np.ndarray
    residuals: np.ndarray
    rss: float
    r2: float
    adj_r2: float
    loglik: float
    aic: float
    bic: float
    bse: np.ndarray
    tvalues: np.ndarray
    pvalues: np.ndarray
    n_params: int
    spec: DesignSpec | None = None
    lam: float | None = None
    y_raw: np.ndarray | None = None
    regressors: dict[str, np.ndarray] = field(default_factory=dict)
    uf: np.ndarray | None = None

    @property
    def nobs(self) -> int:
        return len(self.y)

    @property
    def k(self) -> int:
        return self.X.shape[1]

    @property
    def has_const(self) -> bool:
        return bool(np.any(np.all(self.X == 1.0, axis=0)))

    @property
    def sigma2(self) -> float:
        dof = self.nobs - self.k
        return self.rss / dof if dof > 0 else math.nan

    def coefficients(self) -> dict[str, float]:
        return dict(zip(self.names, self.coef.tolist()))


def ols(
    X: np.ndarray,
    y: np.ndarray,
    names: Sequence[str] | None = None,
    log_jac: float = 0.0,
    extra_params: int = 0,
) -> FittedModel:
    """Plain least squares with Gaussian likelihood criteria.

    ``log_jac`` adds the Jacobian of a response transform to the
    log-likelihood so transformed and raw fits share one scale. The
    parameter count behind AIC/BIC is the coefficients, the error variance
    and ``extra_params``.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, k = X.shape
    if len(y) != n:
        raise ValueError("X and y disagree on the number of observations")
    if np.linalg.matrix_rank(X) < k:
        raise SingularDesignError(f"design matrix of {k} columns is rank deficient")
    names = list(names) if names is not None else [f"x{j}" for j in range(k)]

    q, rmat = np.linalg.qr(X)
    beta = np.linalg.solve(rmat, q.T @ y)
    fitted = X @ beta
    resid = y - fitted
    rss = float(resid @ resid)

    has_const = bool(np.any(np.all(X == 1.0, axis=0)))
    tss = float(np.sum((y - y.mean()) ** 2)) if has_const else float(y @ y)
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    r2 = min(max(r2, 0.0), 1.0)
    dof = n - k
    adj_r2 = 1.0 - (1.0 - r2) * ((n - 1) if has_const else n) / dof if dof > 0 else math.nan

    sigma2_ml = rss / n
    loglik = -0.5 * n * (math.log(2 * math.pi) + math.log(sigma2_ml) + 1) if sigma2_ml > 0 else math.inf
    loglik += log_jac
    n_params = k + 1 + extra_params
    aic = -2 * loglik + 2 * n_params
    bic = -2 * loglik + math.log(n) * n_params

    if dof > 0:
        rinv = np.linalg.inv(rmat)
        cov = (rss / dof) * (rinv @ rinv.T)
        bse = np.sqrt(np.diag(cov))
        with np.errstate(divide="ignore", invalid="ignore"):
            tvalues = beta / bse
        pvalues = 2 * stats.t.sf(np.abs(tvalues), dof)
    else:
        bse = tvalues = pvalues = np.full(k, math.nan)
    return FittedModel(names, beta, X, y, fitted, resid, rss, r2, adj_r2, loglik, aic, bic,
                       bse, tvalues, pvalues, n_params)


def fit_ols(spec: DesignSpec, data, ratio_scale: float = DEFAULT_RATIO_SCALE) -> FittedModel:
    """Fit ``spec`` on economic rows (or a frame from :func:`economic_frame`)."""
    frame = data if isinstance(data, Mapping) else economic_frame(data, ratio_scale)
    X, names = design_matrix(spec, frame)
    y_raw = np.asarray(frame[spec.response], dtype=float)
    family, lam = spec.transform.family, spec.transform.lam
    extra = 0
    if family != "none" and lam is None:
        lam = estimate_lambda(y_raw, X, family)
        extra = 1
    if family == "boxcox" and np.any(y_raw <= 0):
        raise DomainError("Box-Cox needs strictly positive responses")
    y = transform(y_raw, family, lam)
    model = ols(X, y, names, log_jacobian(y_raw, family, lam), extra)
    model.spec = spec
    model.lam = lam if family != "none" else None
    model.y_raw = y_raw
    model.regressors = {name: np.asarray(frame[name], dtype=float) for name in {*spec.linear, *spec.quadratic}}
    model.uf = np.asarray(frame["uf"]) if "uf" in frame else None
    return model


@dataclass(frozen=True)
class TurningPoint:
    regressor: str
    vertex: float | None
    observed_min: float | None = None
    observed_max: float | None = None

    @property
    def in_range(self) -> bool | None:
        if self.vertex is None or self.observed_min is None:
            return None
        return self.observed_min <= self.vertex <= self.observed_max


def turning_points(model: FittedModel | Mapping[str, float]) -> dict[str, TurningPoint]:
    """Vertex ``-b1 / (2 b2)`` for every regressor entering linearly and squared.

    Accepts a fitted model or a plain ``{term: coefficient}`` mapping with
    terms named ``x`` and ``x^2``. A zero quadratic coefficient gives a
    vertex of ``None``.
    """
    if isinstance(model, FittedModel):
        coefs, observed = model.coefficients(), model.regressors
    else:
        coefs, observed = dict(model), {}
    out = {}
    for term, b2 in coefs.items():
        if not term.endswith("^2"):
            continue
        base = term[:-2]
        if base not in coefs:
            continue
        vertex = None if b2 == 0 else -coefs[base] / (2 * b2)
        xs = observed.get(base)
        lo, hi = (float(xs.min()), float(xs.max())) if xs is not None else (None, None)
        out[base] = TurningPoint(base, vertex, lo, hi)
    return out
