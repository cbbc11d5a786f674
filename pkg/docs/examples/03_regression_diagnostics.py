"""Fitting the regional beneficiary ratios and screening the candidates.

Run with ``python3 docs/examples/03_regression_diagnostics.py``.
"""
# %%
import numpy as np

from pension_toolkit.io import bundled_path, read_economics
from pension_toolkit.statlab import (
    influence,
    jarque_bera,
    koenker_test,
    rainbow_test,
    select_model,
    standard_candidates,
    turning_points,
    vif,
)

rows = read_economics(bundled_path("economics_sample.csv"))

# %% [markdown]
# Four candidates per response: linear, quadratic, and the quadratic under a
# Box-Cox or Yeo-Johnson response transform with estimated lambda.

# %%
sel = select_model(standard_candidates("elderly"), rows)
for c in sel.candidates:
    m = c.model
    lam = "" if m.lam is None else f"lambda={m.lam:.3f}"
    print(f"{c.spec.label:>11} R2={m.r2:.3f} AIC={m.aic:8.2f} RESET p={c.reset.p_value:.3f} "
          f"{'excluded' if c.excluded else f'rank {c.aic_rank}'} {lam}")

# %%
best = sel.best("aic") or sel.candidates[1]
m = best.model
print("chosen:", best.spec.label)
for name, t in (("Jarque-Bera", jarque_bera(m.residuals)), ("Rainbow", rainbow_test(m)), ("Koenker", koenker_test(m))):
    print(f"  {name:12s} stat={t.statistic:7.3f} p={t.p_value:.3f}")

# %%
for name, tp in turning_points(m).items():
    print(f"turning point in {name}: {tp.vertex:.2f} (observed {tp.observed_min:.1f} to {tp.observed_max:.1f})")
print("VIF:", {k: round(v, 1) for k, v in vif(m.X, m.names).items()})
inf = influence(m)
print("high-leverage UFs:", m.uf[inf.high_leverage].tolist(), "| large Cook's D:", m.uf[inf.influential].tolist())
print("largest studentized residual:", np.round(np.nanmax(np.abs(inf.student_resid)), 2))
