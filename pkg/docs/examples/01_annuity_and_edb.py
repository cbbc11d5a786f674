"""Present values of monthly benefits, from one person to the whole country.

Run with ``python3 docs/examples/01_annuity_and_edb.py``.
"""
# %%
from pension_toolkit import MoneyConfig, load_reference_tables, validate_records
from pension_toolkit.annuity import annuity_pv, invert_annuity, monthly_rate
from pension_toolkit.edb import edb_aggregate, edb_individual, remaining_months
from pension_toolkit.io import bundled_path, money, read_beneficiaries

# %% [markdown]
# A 6% annual rate compounds to a monthly rate a little under half a percent.

# %%
cfg = MoneyConfig()
r = monthly_rate(cfg.annual_rate)
print(f"monthly rate {r:.8f}, benefit {cfg.benefit_b:.2f} EUR")
print("value of one year of unit payments:", round(annuity_pv(12, r), 6))

# %% [markdown]
# Someone aged 65 years and 2 months, in a UF where the expected age at death
# is 69, has 46 months left. Their expected discounted benefit:

# %%
lt = remaining_months(69.0, (65, 2))
pv = edb_individual(lt, cfg)
print(lt.months, "months ->", money(pv), "EUR")
print("inverting gives back", invert_annuity(pv, cfg.benefit_b, r), "months")

# %% [markdown]
# Aggregating the bundled synthetic sample. Survivors and rejected rows are
# left out before aggregation.

# %%
table, ufs = load_reference_tables()
report = validate_records(read_beneficiaries(bundled_path("beneficiaries_sample.csv")))
print(report.counts())
edb = edb_aggregate(report.elderly(), table, cfg, basis="after65")
print("national total", money(edb.total), "EUR /", money(edb.total_brl), "BRL")

# %%
names = {u.number: u.abbrev for u in ufs}
for g in edb.rows("uf")[:5]:
    print(f"{names[g.uf]:>3} n={g.count:4d} per capita {money(g.per_capita):>10} "
          f"share {g.share_pct:5.2f}% cumulative {g.cum_share_pct:6.2f}%")
