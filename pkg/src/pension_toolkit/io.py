"""CSV/JSON ingestion and emission."""

from __future__ import annotations

import csv
import datetime as dt
import hashlib
import json
import math
from decimal import ROUND_HALF_UP, Decimal
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core_types import BeneficiaryRecord, EconomicRow, Kind, Sex
from .errors import DomainError, SchemaError

BENEFICIARY_COLUMNS = ("id", "uf_num", "sex", "birth_date", "grant_date", "kind", "survivor")
ECONOMIC_COLUMNS = (
    "uf_num", "hdi", "income_pc", "le_birth", "density", "population",
    "bnf_total", "bnf_elderly", "bnf_disabled",
)
SCHEMA_VERSION = "1"
MAX_DIAGNOSTICS = 50


def bundled_path(name: str) -> Path:
    """Path of a file shipped in the package ``data`` directory."""
    return Path(str(resources.files(__package__).joinpath("data").joinpath(name)))


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_rows(path: str | Path, columns: Sequence[str]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: missing header row")
        missing = [c for c in columns if c not in reader.fieldnames]
        if missing:
            raise SchemaError(f"{path}: missing columns {missing}", [f"header: missing {c}" for c in missing])
        return list(reader)


def _raise_if(diagnostics: list[str], path) -> None:
    if diagnostics:
        shown = diagnostics[:MAX_DIAGNOSTICS]
        raise SchemaError(f"{path}: {len(diagnostics)} invalid row(s)", shown)


def read_beneficiaries(path: str | Path) -> list[BeneficiaryRecord]:
    """Parse ``beneficiaries.csv``; any malformed row raises :class:`SchemaError`."""
    out, diagnostics = [], []
    for line, row in enumerate(_read_rows(path, BENEFICIARY_COLUMNS), start=2):
        try:
            uf = int(row["uf_num"])
            if not 1 <= uf <= 27:
                raise ValueError(f"uf_num {uf} outside 1..27")
            kind = row["kind"].strip().upper()
            if kind not in ("E", "D"):
                raise ValueError(f"kind must be E or D, got {row['kind']!r}")
            survivor = row["survivor"].strip()
            if survivor not in ("0", "1"):
                raise ValueError(f"survivor must be 0 or 1, got {survivor!r}")
            out.append(BeneficiaryRecord(
                id=row["id"],
                uf=uf,
                sex=Sex.from_code(row["sex"]),
                birth_date=dt.date.fromisoformat(row["birth_date"].strip()),
                grant_date=dt.date.fromisoformat(row["grant_date"].strip()),
                kind=Kind(kind),
                survivor=survivor == "1",
            ))
        except (ValueError, DomainError, TypeError) as exc:
            diagnostics.append(f"row {line}: {exc}")
    _raise_if(diagnostics, path)
    return out


def read_economics(path: str | Path) -> list[EconomicRow]:
    out, diagnostics = [], []
    for line, row in enumerate(_read_rows(path, ECONOMIC_COLUMNS), start=2):
        try:
            rec = EconomicRow(
                uf=int(row["uf_num"]),
                hdi=float(row["hdi"]),
                income_pc=float(row["income_pc"]),
                le_birth=float(row["le_birth"]),
                density=float(row["density"]),
                population=int(row["population"]),
                bnf_total=int(row["bnf_total"]),
                bnf_elderly=int(row["bnf_elderly"]),
                bnf_disabled=int(row["bnf_disabled"]),
            )
            if not all(math.isfinite(v) for v in (rec.hdi, rec.income_pc, rec.le_birth, rec.density)):
                raise ValueError("non-finite value")
            out.append(rec)
        except (ValueError, DomainError, TypeError) as exc:
            diagnostics.append(f"row {line}: {exc}")
    _raise_if(diagnostics, path)
    if len({r.uf for r in out}) != len(out):
        raise SchemaError(f"{path}: duplicate uf_num rows")
    return out


def write_beneficiaries(path: str | Path, records: Iterable[BeneficiaryRecord]) -> None:
    rows = [
        (r.id, r.uf, Sex(r.sex).code, r.birth_date.isoformat(), r.grant_date.isoformat(), r.kind.value,
         int(r.survivor))
        for r in records
    ]
    write_csv(path, BENEFICIARY_COLUMNS, rows)


def money(x: float) -> str:
    """Two decimals, half-up, from the shortest repr of ``x``."""
    return str(Decimal(repr(float(x))).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def num(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".10g")


def write_csv(path: str | Path, header: Sequence[str], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    return path


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, (dt.date, dt.datetime)):
        return obj.isoformat()
    if isinstance(obj, Path):
        return str(obj)
    if hasattr(obj, "value"):
        return obj.value
    return obj


def write_json(path: str | Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False)
    path.write_text(text + "\n", encoding="utf-8")
    return path
