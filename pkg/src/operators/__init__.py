from .bilinear import bi_alpha, bi_alpha_at, bm, trilinear_form
from .commutators import CommutatorSpec, commutator_direct, commutator_kernel
from .maximal import m_orlicz, m_orlicz_alpha, shifted_grid_sum

__all__ = [
    "CommutatorSpec",
    "bi_alpha",
    "bi_alpha_at",
    "bm",
    "commutator_direct",
    "commutator_kernel",
    "m_orlicz",
    "m_orlicz_alpha",
    "shifted_grid_sum",
    "trilinear_form",
]
