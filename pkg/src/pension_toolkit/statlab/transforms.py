"""Box-Cox and Yeo-Johnson response transforms and their profile-likelihood lambda."""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateError, DomainError, PreconditionError

FAMILIES = ("none", "boxcox", "yeojohnson")
LAMBDA_BOUNDS = (-3.0, 3.0)
_INV_PHI = (math.sqrt(5) - 1) / 2
_TINY_LAMBDA = 1e-10


def _power_term(log_base, lam: float):
    """``(exp(lam * log_base) - 1) / lam``, stable for tiny and zero ``lam``."""
    if lam == 0:
        return log_base
    if abs(lam) < _TINY_LAMBDA:
        # second-order series; lam * log_base could underflow otherwise
        return log_base * (1 + lam * log_base / 2)
    t = lam * log_base
    return np.expm1(t) / lam


def box_cox(y, lam: float):
    y_arr = np.asarray(y, dtype=float)
    if np.any(y_arr <= 0):
        raise DomainError("Box-Cox needs strictly positive values")
    if abs(lam) < _TINY_LAMBDA:
        out = _power_term(np.log(y_arr), lam)
    else:
        t = lam * np.log(y_arr)
        # expm1 near lambda = 0, the plain power elsewhere (exact on integer cases)
        out = np.where(np.abs(t) < 0.5, np.expm1(t), y_arr**lam - 1.0) / lam
    return float(out) if out.ndim == 0 else out


def yeo_johnson(y, lam: float):
    y_arr = np.asarray(y, dtype=float)
    out = np.empty_like(y_arr)
    pos = y_arr >= 0
    yp, yn = y_arr[pos], -y_arr[~pos]
    out[pos] = _power_term(np.log1p(yp), lam)
    out[~pos] = -_power_term(np.log1p(yn), 2 - lam)
    return float(out) if out.ndim == 0 else out


def transform(y, family: str, lam: float | None):
    if family == "none":
        return np.asarray(y, dtype=float)
    if family == "boxcox":
        return box_cox(y, lam)
    if family == "yeojohnson":
        return yeo_johnson(y, lam)
    raise ValueError(f"unknown transform family {family!r}")


def log_jacobian(y, family: str, lam: float | None) -> float:
    """Log-Jacobian of the transform, summed over observations."""
    y = np.asarray(y, dtype=float)
    if family == "none":
        return 0.0
    if family == "boxcox":
        return (lam - 1) * float(np.sum(np.log(y)))
    if family == "yeojohnson":
        return (lam - 1) * float(np.sum(np.sign(y) * np.log1p(np.abs(y))))
    raise ValueError(f"unknown transform family {family!r}")


def profile_loglik(lam: float, y: np.ndarray, X: np.ndarray, family: str) -> float:
    """Concentrated Gaussian log-likelihood of the transformed response, up to a constant."""
    z = transform(y, family, lam)
    beta, *_ = np.linalg.lstsq(X, z, rcond=None)
    rss = float(np.sum((z - X @ beta) ** 2))
    n = len(y)
    if rss <= 0:
        return math.inf
    return -0.5 * n * math.log(rss / n) + log_jacobian(y, family, lam)


def golden_section_max(f, a: float, b: float, tol: float = 1e-5) -> float:
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def estimate_lambda(y, X, family: str, bounds=LAMBDA_BOUNDS, tol: float = 1e-5) -> float:
    """Maximum-likelihood lambda for ``family`` given design ``X``.

    A 61-point grid over ``bounds`` brackets the global maximum, then
    golden-section search refines it to ``tol``.
    """
    y = np.asarray(y, dtype=float)
    X = np.asarray(X, dtype=float)
    if family not in ("boxcox", "yeojohnson"):
        raise ValueError(f"no lambda to estimate for family {family!r}")
    n, k = X.shape
    if n <= k + 2:
        raise PreconditionError(f"need more than {k + 2} observations, got {n}")
    if family == "boxcox" and np.any(y <= 0):
        raise DomainError("Box-Cox needs strictly positive responses")
    if np.ptp(y) == 0:
        raise DegenerateError("constant response carries no information about lambda")

    def ll(lam):
        return profile_loglik(lam, y, X, family)

    grid = np.linspace(bounds[0], bounds[1], 61)
    values = [ll(g) for g in grid]
    best = int(np.argmax(values))
    step = grid[1] - grid[0]
    lo, hi = max(bounds[0], grid[best] - step), min(bounds[1], grid[best] + step)
    return golden_section_max(ll, lo, hi, tol)
