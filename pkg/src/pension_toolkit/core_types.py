"""Domain types, the bundled UF life-expectancy table and record validation."""

from __future__ import annotations

import csv
import datetime as dt
import enum
import hashlib
import io
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, IntegrityError, MissingReferenceError

LIFE_TABLE_RESOURCE = "uf_life_table.csv"
LIFE_TABLE_SHA256 = "89b4ae425f7d77ef9414981330064f4c5128f09574ee626437c4068939fda612"

SAMPLE_WINDOW = (dt.date(2018, 1, 2), dt.date(2018, 4, 6))
REFERENCE_DATE = dt.date(2018, 4, 6)
# Minimum wage in 2018 (R$ 954.00) at the EUR/BRL rate used for reporting.
MINIMUM_WAGE_BRL = 954.0
EXCHANGE_RATE = 4.35


class Sex(enum.IntEnum):
    MALE = 1
    FEMALE = 2

    @classmethod
    def from_code(cls, code: str) -> "Sex":
        try:
            return {"M": cls.MALE, "F": cls.FEMALE}[code.strip().upper()]
        except KeyError:
            raise DomainError(f"unknown sex code {code!r}") from None

    @property
    def code(self) -> str:
        return "M" if self is Sex.MALE else "F"


class Kind(enum.Enum):
    ELDERLY = "E"
    DISABLED = "D"


class Basis(str, enum.Enum):
    """Which life-expectancy column a computation reads."""

    BIRTH = "birth"
    AFTER60 = "after60"
    AFTER65 = "after65"


_BASES = (Basis.BIRTH, Basis.AFTER60, Basis.AFTER65)
_SEX_COLUMNS = ("total", "male", "female")


@dataclass(frozen=True)
class UfCode:
    number: int
    abbrev: str
    name: str

    def __post_init__(self):
        if not 1 <= self.number <= 27:
            raise DomainError(f"UF number out of range: {self.number}")
        if len(self.abbrev) != 2:
            raise DomainError(f"UF abbreviation must have 2 letters: {self.abbrev!r}")


@dataclass(frozen=True, eq=False)
class UfLifeTable:
    """Life expectancies per UF.

    ``values[row, basis, col]`` holds years, with basis ordered
    (birth, after60, after65) and col ordered (total, male, female).
    The after-60/after-65 entries are expected *ages at death*, not
    residual years.
    """

    ufs: tuple[UfCode, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.shape != (len(self.ufs), 3, 3):
            raise DomainError(f"life table has shape {values.shape}, expected ({len(self.ufs)}, 3, 3)")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "_row", {u.number: k for k, u in enumerate(self.ufs)})

    def __len__(self):
        return len(self.ufs)

    def __eq__(self, other):
        if not isinstance(other, UfLifeTable):
            return NotImplemented
        return self.ufs == other.ufs and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash((self.ufs, self.values.tobytes()))

    @property
    def numbers(self) -> np.ndarray:
        return np.array([u.number for u in self.ufs])

    def row(self, uf: int | UfCode) -> int:
        number = uf.number if isinstance(uf, UfCode) else int(uf)
        try:
            return self._row[number]
        except KeyError:
            raise MissingReferenceError(f"UF {number} is not in the life table") from None

    def lookup(self, uf: int | UfCode | str, basis: Basis | str, sex: Sex | None = None) -> float:
        """Expectancy for one UF; ``sex=None`` selects the total column."""
        if isinstance(uf, str):
            uf = uf_by_abbrev(uf)
        return float(self.values[self.row(uf), _BASES.index(Basis(basis)), 0 if sex is None else int(sex)])

    def column(self, basis: Basis | str, sex: Sex | None = None) -> np.ndarray:
        return self.values[:, _BASES.index(Basis(basis)), 0 if sex is None else int(sex)]

    def by_uf_and_sex(self, basis: Basis | str) -> dict[tuple[int, Sex], float]:
        return {
            (u.number, s): self.lookup(u.number, basis, s)
            for u in self.ufs
            for s in Sex
        }

    @classmethod
    def uniform(cls, ufs: Sequence[UfCode], value: float) -> "UfLifeTable":
        """Table where every UF, sex and basis shares one expectancy."""
        return cls(tuple(ufs), np.full((len(ufs), 3, 3), float(value)))


@dataclass(frozen=True)
class BeneficiaryRecord:
    id: str
    uf: int
    sex: Sex
    birth_date: dt.date
    grant_date: dt.date
    kind: Kind
    survivor: bool = False


@dataclass(frozen=True)
class EconomicRow:
    uf: int
    hdi: float
    income_pc: float
    le_birth: float
    density: float
    population: int
    bnf_total: int
    bnf_elderly: int
    bnf_disabled: int

    def __post_init__(self):
        if self.population <= 0:
            raise DomainError(f"UF {self.uf}: population must be positive")
        if min(self.bnf_total, self.bnf_elderly, self.bnf_disabled) < 0:
            raise DomainError(f"UF {self.uf}: beneficiary counts must be non-negative")


@dataclass(frozen=True)
class MoneyConfig:
    benefit_b: float = MINIMUM_WAGE_BRL / EXCHANGE_RATE
    annual_rate: float = 0.06
    exchange_rate: float = EXCHANGE_RATE
    reference_date: dt.date = REFERENCE_DATE

    def __post_init__(self):
        if not self.benefit_b > 0:
            raise DomainError("benefit must be positive")
        if not self.annual_rate > -1:
            raise DomainError("annual rate must exceed -1")
        if not self.exchange_rate > 0:
            raise DomainError("exchange rate must be positive")


@dataclass(frozen=True)
class Rejection:
    index: int
    id: str
    reason: str


@dataclass(frozen=True)
class ValidationReport:
    accepted: tuple[BeneficiaryRecord, ...] = ()
    rejected: tuple[Rejection, ...] = ()

    @property
    def n_input(self) -> int:
        return len(self.accepted) + len(self.rejected)

    @property
    def survivors(self) -> tuple[BeneficiaryRecord, ...]:
        return tuple(r for r in self.accepted if r.survivor)

    @property
    def analysis_set(self) -> tuple[BeneficiaryRecord, ...]:
        """Accepted records minus survivor entitlements."""
        return tuple(r for r in self.accepted if not r.survivor)

    def elderly(self, include_survivors: bool = False) -> tuple[BeneficiaryRecord, ...]:
        pool = self.accepted if include_survivors else self.analysis_set
        return tuple(r for r in pool if r.kind is Kind.ELDERLY)

    def counts(self) -> dict[str, int]:
        def by_kind(records, kind):
            return sum(r.kind is kind for r in records)

        return {
            "input": self.n_input,
            "accepted": len(self.accepted),
            "rejected": len(self.rejected),
            "excluded_survivor": len(self.survivors),
            "analysis": len(self.analysis_set),
            "elderly_accepted": by_kind(self.accepted, Kind.ELDERLY),
            "elderly_analysis": by_kind(self.analysis_set, Kind.ELDERLY),
            "disabled_accepted": by_kind(self.accepted, Kind.DISABLED),
            "disabled_analysis": by_kind(self.analysis_set, Kind.DISABLED),
        }


def validate_records(
    records: Iterable[BeneficiaryRecord],
    window: tuple[dt.date, dt.date] | None = SAMPLE_WINDOW,
) -> ValidationReport:
    """Split records into accepted and rejected.

    Survivors stay in ``accepted`` and are only flagged; use
    :attr:`ValidationReport.analysis_set` for the filtered set.
    """
    accepted, rejected = [], []
    for k, rec in enumerate(records):
        if rec.grant_date < rec.birth_date:
            rejected.append(Rejection(k, rec.id, "date order"))
        elif window is not None and not window[0] <= rec.grant_date <= window[1]:
            rejected.append(Rejection(k, rec.id, "grant date outside sample window"))
        else:
            accepted.append(rec)
    return ValidationReport(tuple(accepted), tuple(rejected))


def _parse_life_table(text: str) -> UfLifeTable:
    reader = csv.DictReader(io.StringIO(text))
    ufs, values = [], []
    for row in reader:
        ufs.append(UfCode(int(row["number"]), row["abbrev"], row["name"]))
        values.append([[float(row[f"{b.value}_{c}"]) for c in _SEX_COLUMNS] for b in _BASES])
    return UfLifeTable(tuple(ufs), np.array(values))


def check_life_table(table: UfLifeTable) -> None:
    """Raise IntegrityError unless the table passes basic sanity checks."""
    v = table.values
    if len({u.number for u in table.ufs}) != len(table.ufs):
        raise IntegrityError("duplicate UF numbers in life table")
    if not np.all((v > 50) & (v < 100)):
        raise IntegrityError("life expectancies outside (50, 100)")
    if not (np.all(v[:, 2, :] >= v[:, 1, :]) and np.all(v[:, 1, :] >= v[:, 0, :])):
        raise IntegrityError("expected age at death must not decrease with conditioning age")


@lru_cache(maxsize=None)
def _bundled() -> tuple[UfLifeTable, tuple[UfCode, ...]]:
    raw = resources.files(__package__).joinpath("data").joinpath(LIFE_TABLE_RESOURCE).read_bytes()
    if hashlib.sha256(raw).hexdigest() != LIFE_TABLE_SHA256:
        raise IntegrityError("bundled life table failed its checksum")
    try:
        table = _parse_life_table(raw.decode("utf-8"))
    except (KeyError, ValueError) as exc:
        raise IntegrityError(f"bundled life table is unreadable: {exc}") from exc
    check_life_table(table)
    if len(table) != 27:
        raise IntegrityError(f"bundled life table has {len(table)} rows")
    return table, table.ufs


def load_reference_tables() -> tuple[UfLifeTable, list[UfCode]]:
    """The 27-UF life-expectancy table shipped with the package."""
    table, ufs = _bundled()
    return table, list(ufs)


def uf_by_number(number: int) -> UfCode:
    for u in _bundled()[1]:
        if u.number == number:
            return u
    raise MissingReferenceError(f"no UF with number {number}")


def uf_by_abbrev(abbrev: str) -> UfCode:
    for u in _bundled()[1]:
        if u.abbrev == abbrev.upper():
            return u
    raise MissingReferenceError(f"no UF with abbreviation {abbrev!r}")


def uf_by_name(name: str) -> UfCode:
    for u in _bundled()[1]:
        if u.name == name:
            return u
    raise MissingReferenceError(f"no UF named {name!r}")


def age_in_months(birth: dt.date, on: dt.date) -> int:
    """Completed calendar months between ``birth`` and ``on``."""
    months = (on.year - birth.year) * 12 + (on.month - birth.month)
    if on.day < birth.day:
        months -= 1
    return months
