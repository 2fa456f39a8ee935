from .ratios import (
    RatioEstimate,
    control_ratio,
    pair_family,
    strong_ratio,
    weak_necessity_check,
    weak_norm,
    weak_ratio,
)
from .report import CSV_COLUMNS, SCHEMA_VERSION, TheoremReport
from .steinweiss import section10_example, steinweiss_check, steinweiss_conditions
from .theorems import judge, one_weight_equivalence, verify_theorem
from .trend import DIVERGENT, INDETERMINATE, STABLE, classify_scale_profile, classify_trend, drift

__all__ = [
    "CSV_COLUMNS",
    "DIVERGENT",
    "INDETERMINATE",
    "RatioEstimate",
    "SCHEMA_VERSION",
    "STABLE",
    "TheoremReport",
    "classify_scale_profile",
    "classify_trend",
    "control_ratio",
    "drift",
    "judge",
    "one_weight_equivalence",
    "pair_family",
    "section10_example",
    "steinweiss_check",
    "steinweiss_conditions",
    "strong_ratio",
    "verify_theorem",
    "weak_necessity_check",
    "weak_norm",
    "weak_ratio",
]
