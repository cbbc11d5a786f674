"""Age adjusting factors that equalize per-capita EDB across groups.

Two ways of turning a per-capita gap ``d`` into a month offset ``w`` are
available:

``"annuity"``
    ``|d| = b * a(|w|, r)``, i.e. the gap is read as the value of ``|w|``
    extra monthly payments starting now.
``"equalize"`` (default)
    ``w`` is the integer for which the group's recomputed per-capita EDB,
    with every remaining lifetime shifted to ``max(0, LT + w)``, lands
    closest to the target.

Shifting a lifetime by ``w`` adds payments at the *end* of the benefit
stream, discounted by ``(1 + r) ** -LT``, so the annuity reading
under-corrects whenever lifetimes are long. Only the equalizing offset
brings each group to within one monthly payment of the target.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .annuity import annuity_pv, invert_annuity, monthly_rate
from .core_types import Basis, BeneficiaryRecord, MoneyConfig, Sex, UfLifeTable
from .edb import Lifetimes, population_lifetimes
from .errors import InfeasibleTargetError

BASE_AGE_MONTHS = 65 * 12
OFFSET_METHODS = ("equalize", "annuity")
MAX_OFFSET_MONTHS = 12 * 1000


class AafWarning(UserWarning):
    pass


@dataclass(frozen=True)
class AafResult:
    proposal: int
    uf: int
    sex: Sex | None
    count: int
    per_capita: float
    target: float
    d: float
    w_months: int
    w_annuity_months: int
    warning: str | None = None

    @property
    def z_months(self) -> int:
        return abs(self.w_months)

    @property
    def factor(self) -> float:
        return (BASE_AGE_MONTHS + self.w_months) / BASE_AGE_MONTHS

    @property
    def new_age(self) -> float:
        """New starting age in years (``factor * 65``)."""
        return (BASE_AGE_MONTHS + self.w_months) / 12


@dataclass(frozen=True)
class ReformGap:
    uf: int
    gap_years: float


def benefit_difference(target_per_capita: float, group_per_capita: float) -> float:
    return target_per_capita - group_per_capita


def solve_offset(d: float, b: float, r: float, rounding: str = "nearest") -> int:
    """Signed month count whose annuity of ``b`` is worth ``|d|``."""
    if d == 0:
        return 0
    z = invert_annuity(abs(d), b, r, rounding)
    return int(math.copysign(z, d)) if z else 0


def shifted_per_capita(months: np.ndarray, w: int, b: float, r: float) -> float:
    """Per-capita EDB after moving every lifetime to ``max(0, months + w)``."""
    months = np.asarray(months)
    if months.size == 0:
        return 0.0
    shifted = np.maximum(months + w, 0)
    return math.fsum(np.atleast_1d(b * annuity_pv(shifted, r)).tolist()) / months.size


def equalizing_offset(months: np.ndarray, target: float, b: float, r: float) -> int:
    """Integer ``w`` bringing :func:`shifted_per_capita` closest to ``target``.

    The shifted per-capita value is non-decreasing in ``w``; ties go to the
    offset nearer zero.
    """
    months = np.asarray(months, dtype=int)
    if r > 0 and target >= b / r:
        raise InfeasibleTargetError(f"target {target:.6g} reaches the perpetuity value b/r")

    def f(w):
        return shifted_per_capita(months, w, b, r)

    f0 = f(0)
    if target == f0:
        return 0
    if target > f0:
        hi = 1
        while f(hi) < target:
            if hi >= MAX_OFFSET_MONTHS:
                raise InfeasibleTargetError(f"no offset up to {MAX_OFFSET_MONTHS} months reaches {target:.6g}")
            hi = min(2 * hi, MAX_OFFSET_MONTHS)
        lo = 0  # f(lo) < target <= f(hi)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if f(mid) < target:
                lo = mid
            else:
                hi = mid
        return lo if target - f(lo) <= f(hi) - target else hi
    lo = -int(months.max()) if months.size else -1
    lo = min(lo, -1)
    hi = 0  # f(lo) <= target < f(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid) > target:
            hi = mid
        else:
            lo = mid
    return hi if f(hi) - target <= target - f(lo) else lo


def _group_result(
    proposal: int,
    uf: int,
    sex: Sex | None,
    months: np.ndarray,
    target: float,
    cfg: MoneyConfig,
    method: str,
) -> AafResult | None:
    b, r = cfg.benefit_b, monthly_rate(cfg.annual_rate)
    per_capita = shifted_per_capita(months, 0, b, r)
    d = benefit_difference(target, per_capita)
    label = f"UF {uf}" + (f" {sex.name.lower()}" if sex is not None else "")
    try:
        w_annuity = solve_offset(d, b, r)
        w = equalizing_offset(months, target, b, r) if method == "equalize" else w_annuity
    except InfeasibleTargetError as exc:
        warnings.warn(f"{label}: group skipped, {exc}", AafWarning, stacklevel=3)
        return None
    note = None
    clamped = int(np.count_nonzero(months + w < 0))
    if w < 0 and clamped:
        note = f"offset exceeds remaining lifetime for {clamped} of {len(months)} records; clamped at 0"
    return AafResult(proposal, uf, sex, len(months), per_capita, target, d, w, w_annuity, note)


def _check_method(method: str) -> None:
    if method not in OFFSET_METHODS:
        raise ValueError(f"method must be one of {OFFSET_METHODS}")


def _per_capita(lts: Lifetimes, mask: np.ndarray, cfg: MoneyConfig) -> float:
    return shifted_per_capita(lts.months[mask], 0, cfg.benefit_b, monthly_rate(cfg.annual_rate))


def aaf_proposal1(
    records: Iterable[BeneficiaryRecord],
    table: UfLifeTable,
    cfg: MoneyConfig,
    target: str = "sex",
    method: str = "equalize",
    basis: Basis | str = Basis.BIRTH,
) -> list[AafResult]:
    """One factor per UF and sex.

    ``target="sex"`` compares each cell with the national per-capita EDB
    of its own sex; ``target="national"`` uses the all-sex figure.
    """
    _check_method(method)
    if target not in ("sex", "national"):
        raise ValueError("target must be 'sex' or 'national'")
    lts = population_lifetimes(records, table, cfg, basis)
    national = _per_capita(lts, np.ones(len(lts), dtype=bool), cfg)
    results = []
    for uf in sorted(set(lts.uf.tolist())):
        for sex in Sex:
            mask = (lts.uf == uf) & (lts.sex == int(sex))
            if not mask.any():
                warnings.warn(f"UF {uf} {sex.name.lower()}: no records, group skipped", AafWarning, stacklevel=2)
                continue
            goal = _per_capita(lts, lts.sex == int(sex), cfg) if target == "sex" else national
            res = _group_result(1, uf, sex, lts.months[mask], goal, cfg, method)
            if res is not None:
                results.append(res)
    return results


def aaf_proposal2(
    records: Iterable[BeneficiaryRecord],
    table: UfLifeTable,
    cfg: MoneyConfig,
    method: str = "equalize",
    basis: Basis | str = Basis.BIRTH,
) -> list[AafResult]:
    """One factor per UF, sexes pooled; the target is total EDB over ``n``."""
    _check_method(method)
    lts = population_lifetimes(records, table, cfg, basis)
    national = _per_capita(lts, np.ones(len(lts), dtype=bool), cfg)
    results = []
    for uf in sorted(set(lts.uf.tolist())):
        res = _group_result(2, uf, None, lts.months[lts.uf == uf], national, cfg, method)
        if res is not None:
            results.append(res)
    return results


def modified_lifetimes(lts: Lifetimes, results: Iterable[AafResult]) -> np.ndarray:
    """Remaining lifetimes after applying each group's offset, floored at 0."""
    months = lts.months.copy()
    for res in results:
        mask = lts.uf == res.uf
        if res.sex is not None:
            mask &= lts.sex == int(res.sex)
        months[mask] = np.maximum(lts.months[mask] + res.w_months, 0)
    return months


def reform_gap(table: UfLifeTable, new_age: float = 70.0) -> list[ReformGap]:
    """Male life expectancy at birth minus a proposed eligibility age, per UF."""
    col = table.column(Basis.BIRTH, Sex.MALE)
    return [ReformGap(u.number, round(float(v) - new_age, 2)) for u, v in zip(table.ufs, col)]
