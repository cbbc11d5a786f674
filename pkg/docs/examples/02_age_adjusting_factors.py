"""Age adjusting factors and the gap to a later eligibility age.

Run with ``python3 docs/examples/02_age_adjusting_factors.py``.
"""
# %%
import warnings

from pension_toolkit import MoneyConfig, load_reference_tables, validate_records
from pension_toolkit.aaf import AafWarning, aaf_proposal1, aaf_proposal2, reform_gap
from pension_toolkit.io import bundled_path, read_beneficiaries

cfg = MoneyConfig()
table, ufs = load_reference_tables()
names = {u.number: u.abbrev for u in ufs}
people = validate_records(read_beneficiaries(bundled_path("beneficiaries_sample.csv"))).elderly()

# %% [markdown]
# Proposal 2 pools both sexes and gives each UF one factor. A positive
# offset means the UF's per-capita benefit sits below the national figure.

# %%
p2 = aaf_proposal2(people, table, cfg)
for res in sorted(p2, key=lambda x: x.w_months)[:3] + sorted(p2, key=lambda x: x.w_months)[-3:]:
    print(f"{names[res.uf]:>3} d={res.d:9.2f} w={res.w_months:+5d} factor={res.factor:.4f} "
          f"age {res.new_age:.2f}")

# %% [markdown]
# The two offset rules side by side. ``w_annuity_months`` prices the gap as
# extra payments; ``w_months`` is the shift that actually equalizes.

# %%
for res in p2[:5]:
    print(names[res.uf], res.w_months, res.w_annuity_months)

# %% [markdown]
# Proposal 1 works per UF and sex. Cells with no records are skipped with a
# warning.

# %%
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always", AafWarning)
    p1 = aaf_proposal1(people, table, cfg, target="sex")
print(len(p1), "cells,", len(caught), "skipped")

# %%
gaps = reform_gap(table, 70.0)
low, high = min(gaps, key=lambda g: g.gap_years), max(gaps, key=lambda g: g.gap_years)
print(f"male life expectancy at birth minus 70: {names[low.uf]} {low.gap_years}, {names[high.uf]} {high.gap_years}")
