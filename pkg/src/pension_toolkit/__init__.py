"""Expected discounted benefits and age adjusting factors for a micro-pension programme."""

__version__ = "0.1.0"

from .annuity import annuity_pv, invert_annuity, monthly_rate
from .core_types import (
    Basis,
    BeneficiaryRecord,
    EconomicRow,
    Kind,
    MoneyConfig,
    Sex,
    UfCode,
    UfLifeTable,
    load_reference_tables,
    validate_records,
)
from .edb import currency_convert, edb_aggregate, edb_individual, remaining_months
from .aaf import aaf_proposal1, aaf_proposal2, reform_gap, solve_offset
