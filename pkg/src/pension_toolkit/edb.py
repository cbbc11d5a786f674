"""Remaining lifetimes and Expected Discounted Benefit (EDB) aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .annuity import annuity_pv, monthly_rate
from .core_types import (
    Basis,
    BeneficiaryRecord,
    Kind,
    MoneyConfig,
    Sex,
    UfLifeTable,
    age_in_months,
)
from .errors import DomainError

GROUP_KINDS = ("nation", "sex", "uf", "uf_sex")


@dataclass(frozen=True)
class RemainingLifetime:
    months: int
    basis: Basis = Basis.AFTER65

    def __post_init__(self):
        if self.months < 0:
            raise DomainError("remaining lifetime cannot be negative")


def _round_half_up(x: float) -> int:
    # the 1e-9 guard absorbs float noise such as 82.8 * 12 = 993.5999...
    return math.floor(round(x, 9) + 0.5)


def remaining_months(
    expected_age_at_death: float,
    age_at_reference: int | tuple[int, int],
    basis: Basis | str = Basis.AFTER65,
) -> RemainingLifetime:
    """Whole months between the current age and the expected age at death.

    ``age_at_reference`` is either total months or a ``(years, months)``
    pair. The result is floored at zero.
    """
    if expected_age_at_death < 0:
        raise DomainError("expected age at death must be non-negative")
    if isinstance(age_at_reference, tuple):
        years, months = age_at_reference
        age_at_reference = 12 * years + months
    raw = _round_half_up(expected_age_at_death * 12 - age_at_reference)
    return RemainingLifetime(max(0, raw), Basis(basis))


def edb_individual(lt: RemainingLifetime | int, cfg: MoneyConfig) -> float:
    months = lt.months if isinstance(lt, RemainingLifetime) else int(lt)
    return cfg.benefit_b * annuity_pv(months, monthly_rate(cfg.annual_rate))


def currency_convert(v: float, cfg: MoneyConfig) -> float:
    """EUR to BRL at the configured exchange rate."""
    return v * cfg.exchange_rate


@dataclass(frozen=True)
class Lifetimes:
    """Remaining lifetimes of a population, sorted by (uf, sex, id)."""

    ids: tuple[str, ...]
    uf: np.ndarray
    sex: np.ndarray
    months: np.ndarray
    basis: Basis

    def __len__(self):
        return len(self.ids)


def population_lifetimes(
    records: Iterable[BeneficiaryRecord],
    table: UfLifeTable,
    cfg: MoneyConfig,
    basis: Basis | str = Basis.AFTER65,
) -> Lifetimes:
    """Remaining lifetime of every record, using its UF x sex expectancy.

    Age is measured at ``cfg.reference_date``, not at the grant date.
    """
    basis = Basis(basis)
    le = table.by_uf_and_sex(basis)
    rows = []
    for rec in records:
        key = (rec.uf, Sex(rec.sex))
        if key not in le:
            table.row(rec.uf)  # raises MissingReferenceError naming the UF
        age = age_in_months(rec.birth_date, cfg.reference_date)
        rows.append((rec.uf, int(rec.sex), rec.id, remaining_months(le[key], age, basis).months))
    rows.sort(key=lambda t: (t[0], t[1], t[2]))
    return Lifetimes(
        ids=tuple(t[2] for t in rows),
        uf=np.array([t[0] for t in rows], dtype=int),
        sex=np.array([t[1] for t in rows], dtype=int),
        months=np.array([t[3] for t in rows], dtype=int),
        basis=basis,
    )


@dataclass(frozen=True)
class GroupTotal:
    kind: str
    uf: int | None
    sex: Sex | None
    count: int
    total_edb: float
    per_capita: float
    share_pct: float = 0.0
    cum_share_pct: float = 0.0


@dataclass(frozen=True)
class EdbReport:
    basis: Basis
    cfg: MoneyConfig
    groups: tuple[GroupTotal, ...] = field(default_factory=tuple)

    def rows(self, kind: str) -> list[GroupTotal]:
        return [g for g in self.groups if g.kind == kind]

    def get(self, kind: str, uf: int | None = None, sex: Sex | None = None) -> GroupTotal:
        for g in self.groups:
            if g.kind == kind and g.uf == uf and g.sex == sex:
                return g
        raise KeyError((kind, uf, sex))

    @property
    def nation(self) -> GroupTotal:
        return self.get("nation")

    @property
    def total(self) -> float:
        return self.nation.total_edb

    @property
    def total_brl(self) -> float:
        return currency_convert(self.total, self.cfg)


def _per_capita(total: float, count: int) -> float:
    return total / count if count else 0.0


def _with_shares(rows: Sequence[GroupTotal], grand_total: float) -> list[GroupTotal]:
    # Pareto ordering: largest total first, UF/sex number breaks ties
    ordered = sorted(rows, key=lambda g: (-g.total_edb, g.uf or 0, int(g.sex or 0)))
    out, running = [], []
    for g in ordered:
        share = 100.0 * g.total_edb / grand_total if grand_total > 0 else 0.0
        running.append(share)
        out.append(
            GroupTotal(g.kind, g.uf, g.sex, g.count, g.total_edb, g.per_capita, share, math.fsum(running))
        )
    return out


def aggregate_values(lifetimes: Lifetimes, values: np.ndarray, basis: Basis, cfg: MoneyConfig) -> EdbReport:
    """Group per-individual EDB values into UF x sex, sex, UF and nation totals.

    Every level is reduced with ``math.fsum`` so totals do not depend on
    record order; the nation total is the sum of the two sex totals.
    """
    uf_sex: dict[tuple[int, int], list[float]] = {}
    for u, s, v in zip(lifetimes.uf.tolist(), lifetimes.sex.tolist(), values.tolist()):
        uf_sex.setdefault((u, s), []).append(v)

    cells = {key: (len(vals), math.fsum(vals)) for key, vals in sorted(uf_sex.items())}

    sex_totals = {}
    for s in Sex:
        keys = [k for k in cells if k[1] == int(s)]
        sex_totals[s] = (sum(cells[k][0] for k in keys), math.fsum(cells[k][1] for k in keys))
    uf_totals = {}
    for u in sorted({k[0] for k in cells}):
        keys = [k for k in cells if k[0] == u]
        uf_totals[u] = (sum(cells[k][0] for k in keys), math.fsum(cells[k][1] for k in keys))

    n = sum(c for c, _ in sex_totals.values())
    grand = math.fsum(t for _, t in sex_totals.values())

    nation = GroupTotal("nation", None, None, n, grand, _per_capita(grand, n), 100.0 if grand > 0 else 0.0,
                        100.0 if grand > 0 else 0.0)
    sex_rows = _with_shares(
        [GroupTotal("sex", None, s, c, t, _per_capita(t, c)) for s, (c, t) in sex_totals.items()], grand
    )
    uf_rows = _with_shares(
        [GroupTotal("uf", u, None, c, t, _per_capita(t, c)) for u, (c, t) in uf_totals.items()], grand
    )
    cell_rows = _with_shares(
        [GroupTotal("uf_sex", u, Sex(s), c, t, _per_capita(t, c)) for (u, s), (c, t) in cells.items()], grand
    )
    return EdbReport(basis, cfg, tuple([nation, *sex_rows, *uf_rows, *cell_rows]))


def edb_aggregate(
    records: Iterable[BeneficiaryRecord],
    table: UfLifeTable,
    cfg: MoneyConfig,
    basis: Basis | str = Basis.AFTER65,
    le_resolution: str = "by_uf_and_sex",
) -> EdbReport:
    """EDB report for a filtered elderly population.

    Records must be elderly and not survivors; anything else raises
    ``DomainError``. A record whose UF is absent from ``table`` raises
    ``MissingReferenceError``.
    """
    if le_resolution != "by_uf_and_sex":
        raise ValueError(f"unsupported life-expectancy resolution {le_resolution!r}")
    records = list(records)
    for rec in records:
        if rec.kind is not Kind.ELDERLY or rec.survivor:
            raise DomainError(f"record {rec.id} is not a non-survivor elderly beneficiary")
    lts = population_lifetimes(records, table, cfg, basis)
    values = cfg.benefit_b * np.asarray(annuity_pv(lts.months, monthly_rate(cfg.annual_rate)), dtype=float)
    return aggregate_values(lts, np.atleast_1d(values), lts.basis, cfg)
