"""Monthly rates and end-of-month temporary annuities."""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InfeasibleTargetError

ROUNDING_POLICIES = ("nearest", "floor", "ceil")


def monthly_rate(annual: float) -> float:
    """Monthly rate equivalent to a compound ``annual`` rate."""
    if not annual > -1:
        raise DomainError(f"annual rate must exceed -1, got {annual}")
    return math.expm1(math.log1p(annual) / 12)


def annuity_pv(n, r: float):
    """Present value of ``n`` unit payments made at the end of each month.

    Accepts a scalar or an array of terms. For ``r == 0`` the value is ``n``.
    """
    if not r > -1:
        raise DomainError(f"monthly rate must exceed -1, got {r}")
    n_arr = np.asarray(n, dtype=float)
    if np.any(n_arr < 0):
        raise DomainError("annuity term must be non-negative")
    if r == 0:
        out = n_arr.copy()
    else:
        # -expm1(-n log1p r) keeps precision for tiny r
        out = -np.expm1(-n_arr * math.log1p(r)) / r
    return float(out) if out.ndim == 0 else out


def annuity_term_real(target_pv: float, b: float, r: float) -> float:
    """Real-valued term ``z`` with ``b * annuity_pv(z, r) == target_pv``."""
    if target_pv < 0:
        raise DomainError("target present value must be non-negative")
    if not b > 0:
        raise DomainError("payment must be positive")
    if target_pv == 0:
        return 0.0
    if r == 0:
        return target_pv / b
    x = target_pv * r / b
    if r > 0 and x >= 1:
        raise InfeasibleTargetError(
            f"target {target_pv:.6g} reaches the perpetuity value b/r = {b / r:.6g}"
        )
    return -math.log1p(-x) / math.log1p(r)


def invert_annuity(target_pv: float, b: float, r: float, rounding: str = "nearest") -> int:
    """Integer number of monthly payments of ``b`` worth ``target_pv``.

    ``nearest`` picks the term whose present value is closest to the
    target, ties going to the shorter term.
    """
    if rounding not in ROUNDING_POLICIES:
        raise ValueError(f"rounding must be one of {ROUNDING_POLICIES}")
    z = annuity_term_real(target_pv, b, r)
    nearest = round(z)
    if abs(z - nearest) <= 1e-9 * max(1.0, z):
        return int(nearest)
    lo = math.floor(z)
    if rounding == "floor":
        return lo
    if rounding == "ceil":
        return lo + 1
    err_lo = abs(target_pv - b * annuity_pv(lo, r))
    err_hi = abs(b * annuity_pv(lo + 1, r) - target_pv)
    return lo if err_lo <= err_hi else lo + 1
