"""Turn module results into CSV rows and JSON documents."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .aaf import AafResult, ReformGap
from .cluster import ClusterReport, Dendrogram
from .core_types import Sex, ValidationReport
from .edb import EdbReport, currency_convert
from .io import SCHEMA_VERSION, money, num
from .statlab import influence, jarque_bera, koenker_test, plot_data, rainbow_test, turning_points, vif
from .statlab.selection import Selection

EDB_COLUMNS = ("group_kind", "uf_num", "sex", "count", "total_edb_eur", "per_capita_eur", "share_pct",
               "cum_share_pct", "total_edb_brl", "basis")
AAF_COLUMNS = ("proposal", "uf_num", "sex", "d_eur", "w_months", "factor", "new_age_years")
REFORM_COLUMNS = ("uf_num", "gap_years")
MERGE_COLUMNS = ("a", "b", "height", "size")
LABEL_COLUMNS = ("uf_num", "label")


def _sex(s: Sex | None) -> str:
    return "" if s is None else Sex(s).code


def validation_doc(report: ValidationReport) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "counts": report.counts(),
        "rejected": [{"row": r.index, "id": r.id, "reason": r.reason} for r in report.rejected],
    }


def edb_rows(report: EdbReport) -> list[tuple]:
    return [
        (g.kind, "" if g.uf is None else g.uf, _sex(g.sex), g.count, money(g.total_edb), money(g.per_capita),
         num(g.share_pct), num(g.cum_share_pct), money(currency_convert(g.total_edb, report.cfg)),
         report.basis.value)
        for g in report.groups
    ]


def edb_doc(reports: Sequence[EdbReport]) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "reports": [
            {
                "basis": r.basis.value,
                "total_edb_eur": r.total,
                "total_edb_brl": r.total_brl,
                "groups": [
                    {
                        "group_kind": g.kind,
                        "uf_num": g.uf,
                        "sex": _sex(g.sex) or None,
                        "count": g.count,
                        "total_edb_eur": g.total_edb,
                        "per_capita_eur": g.per_capita,
                        "share_pct": g.share_pct,
                        "cum_share_pct": g.cum_share_pct,
                        "total_edb_brl": currency_convert(g.total_edb, r.cfg),
                    }
                    for g in r.groups
                ],
            }
            for r in reports
        ],
    }


def aaf_rows(results: Sequence[AafResult]) -> list[tuple]:
    return [
        (r.proposal, r.uf, _sex(r.sex), money(r.d), r.w_months, num(r.factor), f"{r.new_age:.2f}")
        for r in results
    ]


def aaf_doc(results: Sequence[AafResult], method: str, target: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "method": method,
        "proposal1_target": target,
        "results": [
            {
                "proposal": r.proposal,
                "uf_num": r.uf,
                "sex": _sex(r.sex) or None,
                "count": r.count,
                "per_capita_eur": r.per_capita,
                "target_eur": r.target,
                "d_eur": r.d,
                "w_months": r.w_months,
                "z_months": r.z_months,
                "w_annuity_months": r.w_annuity_months,
                "factor": r.factor,
                "new_age_years": round(r.new_age, 2),
                "warning": r.warning,
            }
            for r in results
        ],
    }


def reform_rows(gaps: Sequence[ReformGap]) -> list[tuple]:
    return [(g.uf, f"{g.gap_years:.2f}") for g in gaps]


def merge_rows(dend: Dendrogram) -> list[tuple]:
    return [(m.a, m.b, num(m.height), m.size) for m in dend.merges]


def label_rows(report: ClusterReport) -> list[tuple]:
    return [(u, int(l)) for u, l in zip(report.ufs, report.labels)]


def cluster_doc(report: ClusterReport, settings: dict, other_method: str) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "settings": settings,
        "k": report.k,
        "method": report.method,
        "labels": {str(u): int(l) for u, l in zip(report.ufs, report.labels)},
        "members": {str(c): list(m) for c, m in report.members.items()},
        "comparison": {
            "method": other_method,
            "labels": None if report.other_labels is None else {
                str(u): int(l) for u, l in zip(report.ufs, report.other_labels)
            },
            "rand_index": report.rand,
        },
    }


MODEL_COLUMNS = ("response", "model", "transform", "lambda", "n", "k", "r2", "adj_r2", "aic", "bic",
                 "reset_p", "rainbow_p", "koenker_p", "jarque_bera_p", "excluded", "aic_rank", "bic_rank", "error")
COEF_COLUMNS = ("response", "model", "term", "estimate", "std_err", "t", "p")
INFLUENCE_COLUMNS = ("response", "model", "uf_num", "leverage", "student_resid", "cooks_d", "high_leverage",
                     "outlier", "influential")
TURNING_COLUMNS = ("response", "model", "regressor", "vertex", "observed_min", "observed_max", "in_range")
VIF_COLUMNS = ("response", "model", "term", "vif")


def _safe(test, model):
    try:
        return test(model)
    except Exception:  # diagnostics are informative only; a failure leaves the cell blank
        return None


def regress_tables(selections: dict[str, Selection]) -> dict[str, list[tuple]]:
    tables = {"models": [], "coefficients": [], "influence": [], "turning_points": [], "vif": []}
    for response, sel in selections.items():
        for c in sel.candidates:
            label = c.spec.label or c.spec.name
            m = c.model
            if m is None:
                tables["models"].append((response, label, c.spec.transform.family, "", "", "", "", "", "", "",
                                         "", "", "", "", 1, "", "", c.error or ""))
                continue
            rain, koen = _safe(rainbow_test, m), _safe(koenker_test, m)
            jb = _safe(lambda mm: jarque_bera(mm.residuals), m)
            tables["models"].append((
                response, label, c.spec.transform.family, num(m.lam), m.nobs, m.k, num(m.r2), num(m.adj_r2),
                num(m.aic), num(m.bic), num(c.reset.p_value if c.reset else None),
                num(rain.p_value if rain else None), num(koen.p_value if koen else None),
                num(jb.p_value if jb else None), int(c.excluded), num(c.aic_rank), num(c.bic_rank), c.error or "",
            ))
            for term, est, se, t, p in zip(m.names, m.coef, m.bse, m.tvalues, m.pvalues):
                tables["coefficients"].append((response, label, term, num(est), num(se), num(t), num(p)))
            inf = influence(m)
            ufs = m.uf if m.uf is not None else np.arange(1, m.nobs + 1)
            for j in range(m.nobs):
                tables["influence"].append((
                    response, label, int(ufs[j]), num(inf.leverage[j]), num(inf.student_resid[j]),
                    num(inf.cooks_d[j]), int(inf.high_leverage[j]), int(inf.outlier[j]), int(inf.influential[j]),
                ))
            for tp in turning_points(m).values():
                tables["turning_points"].append((response, label, tp.regressor, num(tp.vertex),
                                                 num(tp.observed_min), num(tp.observed_max),
                                                 "" if tp.in_range is None else int(tp.in_range)))
            if m.k - 1 >= 2:
                for term, v in vif(m.X, m.names).items():
                    tables["vif"].append((response, label, term, num(v)))
    return tables


def regress_doc(selections: dict[str, Selection], settings: dict) -> dict:
    out = {"schema_version": SCHEMA_VERSION, "settings": settings, "responses": {}}
    for response, sel in selections.items():
        models = []
        for c in sel.candidates:
            m = c.model
            entry = {"model": c.spec.label or c.spec.name, "transform": c.spec.transform.family,
                     "excluded": c.excluded, "aic_rank": c.aic_rank, "bic_rank": c.bic_rank, "error": c.error}
            if m is not None:
                entry.update({
                    "lambda": m.lam, "n": m.nobs, "coefficients": m.coefficients(), "r2": m.r2,
                    "adj_r2": m.adj_r2, "aic": m.aic, "bic": m.bic,
                    "tests": {
                        name: None if t is None else {"statistic": t.statistic, "p_value": t.p_value,
                                                      "reject": t.reject}
                        for name, t in (("reset", c.reset), ("rainbow", _safe(rainbow_test, m)),
                                        ("koenker", _safe(koenker_test, m)),
                                        ("jarque_bera", _safe(lambda mm: jarque_bera(mm.residuals), m)))
                    },
                    "turning_points": {k: {"vertex": v.vertex, "in_range": v.in_range}
                                       for k, v in turning_points(m).items()},
                })
            models.append(entry)
        best_aic, best_bic = sel.best("aic"), sel.best("bic")
        out["responses"][response] = {
            "models": models,
            "best_aic": best_aic.spec.label if best_aic else None,
            "best_bic": best_bic.spec.label if best_bic else None,
        }
    return out


def plot_tables(selections: dict[str, Selection]) -> dict[str, list[tuple]]:
    """Rows for the four residual panels of every fitted candidate."""
    panels: dict[str, list[tuple]] = {}
    for response, sel in selections.items():
        for c in sel.candidates:
            if c.model is None:
                continue
            label = c.spec.label or c.spec.name
            ufs = c.model.uf if c.model.uf is not None else np.arange(1, c.model.nobs + 1)
            for panel, cols in plot_data(c.model).items():
                names = list(cols)
                rows = panels.setdefault(panel, [("response", "model", "uf_num", *names)])
                for j in range(c.model.nobs):
                    rows.append((response, label, int(ufs[j]), *(num(cols[n][j]) for n in names)))
    return panels
