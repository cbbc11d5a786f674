"""Regenerate the synthetic sample files shipped in ``pension_toolkit/data``.

The real beneficiary microdata and regional indicators are not public, so
the bundled samples are simulated. Ranges follow the published summaries:
HDI 0.63-0.82, income 597-2,548 per month, density 2.01-444.66 per km2,
population 450,479-41,262,199, elderly granted at 65 or later.
"""

import datetime as dt
from pathlib import Path

import numpy as np

from pension_toolkit.core_types import BeneficiaryRecord, Kind, Sex, load_reference_tables
from pension_toolkit.io import ECONOMIC_COLUMNS, write_beneficiaries, write_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "pension_toolkit" / "data"
SEED = 20180406


def beneficiaries(rng, n=800):
    start, end = dt.date(2018, 1, 2), dt.date(2018, 4, 6)
    span = (end - start).days
    weights = rng.uniform(0.3, 3.0, 27)
    weights /= weights.sum()
    records = []
    for k in range(n):
        uf = int(rng.choice(27, p=weights)) + 1
        elderly = rng.random() < 0.5
        sex = Sex.FEMALE if rng.random() < (0.57 if elderly else 0.44) else Sex.MALE
        grant = start + dt.timedelta(days=int(rng.integers(0, span + 1)))
        if elderly:
            age_days = int(365.25 * (65 + rng.exponential(1.5))) + int(rng.integers(0, 365))
        else:
            age_days = int(365.25 * rng.uniform(0, 80))
        birth = grant - dt.timedelta(days=age_days)
        records.append(BeneficiaryRecord(f"B{k:05d}", uf, sex, birth, grant,
                                         Kind.ELDERLY if elderly else Kind.DISABLED,
                                         bool(rng.random() < 0.02)))
    # a few rows that validation must reject
    bad = records[:3]
    records[0] = BeneficiaryRecord(bad[0].id, bad[0].uf, bad[0].sex, bad[0].grant_date + dt.timedelta(days=30),
                                   bad[0].grant_date, bad[0].kind)
    records[1] = BeneficiaryRecord(bad[1].id, bad[1].uf, bad[1].sex, bad[1].birth_date, dt.date(2017, 12, 20),
                                   bad[1].kind)
    return records


def economics(rng):
    table, ufs = load_reference_tables()
    le = table.column("birth")
    income = np.round(rng.uniform(597, 2548, 27), 2)
    hdi = np.round(0.63 + 0.19 * (le - le.min()) / np.ptp(le) + rng.normal(0, 0.01, 27), 3)
    density = np.round(np.exp(rng.uniform(np.log(2.01), np.log(444.66), 27)), 2)
    pop = np.exp(rng.uniform(np.log(450_479), np.log(41_262_199), 27)).astype(int)
    # percentages shaped like the published quadratic fits, plus noise
    disabled = (-144.5 - 3.368e-3 * income + 4.003 * le + 1.018e-6 * income**2 - 2.696e-2 * le**2
                + rng.normal(0, 0.15, 27))
    elderly = np.clip(1.1 + 2e-4 * (income - 1400) + 0.05 * (le - 74) + rng.normal(0, 0.25, 27), 0.42, 1.92)
    disabled = np.clip(disabled, 0.83, 2.6)
    rows = []
    for k, u in enumerate(ufs):
        e = int(round(pop[k] * elderly[k] / 100))
        d = int(round(pop[k] * disabled[k] / 100))
        rows.append((u.number, hdi[k], income[k], le[k], density[k], pop[k], e + d, e, d))
    return rows


def main():
    rng = np.random.default_rng(SEED)
    write_beneficiaries(DATA / "beneficiaries_sample.csv", beneficiaries(rng))
    write_csv(DATA / "economics_sample.csv", ECONOMIC_COLUMNS, economics(rng))


if __name__ == "__main__":
    main()
