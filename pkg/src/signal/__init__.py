from .exponents import ExponentConfig, conjugate
from .families import make_test_family
from .grid_function import GridFunction, average, discrete_holder, lp_norm

__all__ = [
    "ExponentConfig",
    "GridFunction",
    "average",
    "conjugate",
    "discrete_holder",
    "lp_norm",
    "make_test_family",
]
