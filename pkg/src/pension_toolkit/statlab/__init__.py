"""Regression methodology for regional beneficiary ratios."""

from .diagnostics import (
    TestResult,
    influence,
    jarque_bera,
    koenker_test,
    leverage,
    plot_data,
    rainbow_test,
    reset_test,
    vif,
)
from .ols import DesignSpec, FittedModel, Transform, design_matrix, economic_frame, fit_ols, ols, turning_points
from .selection import Candidate, Selection, select_model, standard_candidates
from .transforms import box_cox, estimate_lambda, yeo_johnson
