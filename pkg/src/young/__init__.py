from .bp_condition import IN_BP, NOT_IN_BP, bp_check
from .bumps import parse_young, theorem_bumps
from .orlicz import holder_pair_check, orlicz_norm, orlicz_norm_prime
from .young_function import AssociateFunction, YoungFunction


def associate(phi):
    return phi.associate()


__all__ = [
    "IN_BP",
    "NOT_IN_BP",
    "AssociateFunction",
    "YoungFunction",
    "associate",
    "bp_check",
    "holder_pair_check",
    "orlicz_norm",
    "orlicz_norm_prime",
    "parse_young",
    "theorem_bumps",
]
