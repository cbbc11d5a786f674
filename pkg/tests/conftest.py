import datetime as dt

import numpy as np
import pytest

from pension_toolkit.core_types import BeneficiaryRecord, Kind, MoneyConfig, Sex, load_reference_tables

REF = dt.date(2018, 4, 6)


def birth_for_age(years: int, months: int = 0, ref: dt.date = REF) -> dt.date:
    """Birth date making someone exactly ``years`` y ``months`` m old on ``ref``."""
    total = ref.year * 12 + (ref.month - 1) - (12 * years + months)
    return dt.date(total // 12, total % 12 + 1, ref.day)


def elderly(uid, uf, sex, years=65, months=0, survivor=False, grant=dt.date(2018, 3, 1)):
    return BeneficiaryRecord(str(uid), uf, sex, birth_for_age(years, months), grant, Kind.ELDERLY, survivor)


def random_population(rng, n, ufs, ages=(65, 80)):
    recs = []
    for k in range(n):
        years = int(rng.integers(ages[0], ages[1] + 1))
        months = int(rng.integers(0, 12))
        recs.append(elderly(f"p{k:06d}", int(rng.choice(ufs)), Sex(int(rng.integers(1, 3))), years, months))
    return recs


@pytest.fixture(scope="session")
def table():
    return load_reference_tables()[0]


@pytest.fixture(scope="session")
def ufs():
    return load_reference_tables()[1]


@pytest.fixture
def cfg():
    return MoneyConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LOG: list[tuple[int, bool, str]] = []


def record_criterion(number: int, ok: bool, text: str) -> None:
    ACCEPTANCE_LOG.append((number, bool(ok), text))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, text in sorted(ACCEPTANCE_LOG):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {text}")
