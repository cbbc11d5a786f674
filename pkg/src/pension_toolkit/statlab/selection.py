"""Model selection: RESET as a first filter, then AIC and BIC rankings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..errors import PensionToolkitError
from .diagnostics import ALPHA, TestResult, reset_test
from .ols import DesignSpec, FittedModel, Transform, fit_ols


@dataclass
class Candidate:
    spec: DesignSpec
    model: FittedModel | None = None
    reset: TestResult | None = None
    error: str | None = None
    aic_rank: int | None = None
    bic_rank: int | None = None

    @property
    def excluded(self) -> bool:
        return self.model is None or self.reset is None or self.reset.reject


@dataclass
class Selection:
    candidates: list[Candidate] = field(default_factory=list)

    @property
    def survivors(self) -> list[Candidate]:
        return [c for c in self.candidates if not c.excluded]

    def best(self, criterion: str = "aic") -> Candidate | None:
        ranked = [c for c in self.survivors if getattr(c, f"{criterion}_rank") is not None]
        return min(ranked, key=lambda c: getattr(c, f"{criterion}_rank"), default=None)


def select_model(candidates: Sequence[DesignSpec], data, alpha: float = ALPHA, **fit_kw) -> Selection:
    """Fit every candidate, drop RESET rejections, rank the rest.

    Ties in a criterion go to the model with fewer parameters, then to the
    earlier candidate.
    """
    if not candidates:
        raise ValueError("select_model needs at least one candidate")
    out = []
    for spec in candidates:
        cand = Candidate(spec)
        try:
            cand.model = fit_ols(spec, data, **fit_kw)
            cand.reset = reset_test(cand.model, alpha=alpha)
        except PensionToolkitError as exc:
            cand.error = str(exc)
        out.append(cand)
    survivors = [c for c in out if not c.excluded]
    for crit in ("aic", "bic"):
        order = sorted(
            range(len(survivors)),
            key=lambda j: (getattr(survivors[j].model, crit), survivors[j].model.n_params, j),
        )
        for rank, j in enumerate(order, start=1):
            setattr(survivors[j], f"{crit}_rank", rank)
    return Selection(out)


def standard_candidates(response: str, linear=("income_pc", "le_birth"), quadratic=("income_pc", "le_birth")):
    """The four approaches: linear, quadratic, Box-Cox and Yeo-Johnson (the last two quadratic)."""
    return [
        DesignSpec(response, tuple(linear), (), Transform("none"), "linear"),
        DesignSpec(response, tuple(linear), tuple(quadratic), Transform("none"), "quadratic"),
        DesignSpec(response, tuple(linear), tuple(quadratic), Transform("boxcox"), "boxcox"),
        DesignSpec(response, tuple(linear), tuple(quadratic), Transform("yeojohnson"), "yeojohnson"),
    ]
