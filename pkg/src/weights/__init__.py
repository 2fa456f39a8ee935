from .bmo import bmo_norm, john_nirenberg_check
from .bump_conditions import BUMP_KINDS, WeightTriple, bump_constant, condition_values
from .cube_scan import ConditionConstant, CubeScan
from .muckenhoupt import ainfty_reverse_holder, ap_constant, apq_consequences, apq_constant, doubling_table

__all__ = [
    "BUMP_KINDS",
    "ConditionConstant",
    "CubeScan",
    "WeightTriple",
    "ainfty_reverse_holder",
    "ap_constant",
    "apq_consequences",
    "apq_constant",
    "bmo_norm",
    "bump_constant",
    "condition_values",
    "doubling_table",
    "john_nirenberg_check",
]
