from .selection import SelectedCube, SparseFamily, cz_select
from .sums import (
    SparseTerms,
    geometric_collapse,
    sparse_sum,
    sparse_sum_by_disjoint_sets,
    subtree_weight_sum,
)

__all__ = [
    "SelectedCube",
    "SparseFamily",
    "SparseTerms",
    "cz_select",
    "geometric_collapse",
    "sparse_sum",
    "sparse_sum_by_disjoint_sets",
    "subtree_weight_sum",
]
