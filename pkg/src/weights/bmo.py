# "src/weights/bmo.py"

## Mean oscillation over a `CubeScan`:
## - bmo_norm(b) = max over scan cubes of avg_Q |b - b_Q|
## - john_nirenberg_check(b): max over scan cubes of ||b - b_Q||_{exp L, Q} / ||b||_BMO, plus the
##   measured constant c_n = max avg_Q exp(|b - b_Q| / (2^{n+2} ||b||_BMO))

import logging
import math
from dataclasses import dataclass

import numpy as np

from ..young.orlicz import luxemburg
from ..young.young_function import YoungFunction
from .cube_scan import ConditionConstant

logger = logging.getLogger(__name__)

EXP_L = YoungFunction.expl()


def _oscillation(b, cube):
    """|b - b_Q| on the cells meeting Q and their shares of |Q| (b is zero outside the box)."""
    values, overlap, outside = b.restrict(cube)
    mass = overlap / cube.volume
    mean = float(np.sum(values * mass))
    deviation = np.abs(values - mean)
    if outside > 0:
        deviation = np.append(deviation, abs(mean))
        mass = np.append(mass, outside / cube.volume)
    return deviation, mass


def _mean_oscillation(b, cube):
    deviation, mass = _oscillation(b, cube)
    return float(np.sum(deviation * mass))


def bmo_norm(b, scan):
    if not np.all(np.isfinite(b.values)):
        raise ValueError("BMO norm needs finite cell values")
    constant = scan.maximize(lambda cube: _mean_oscillation(b, cube))
    logger.debug("BMO norm %.6g (argmax %s)", constant.value, constant.argmax)
    return constant


@dataclass
class JohnNirenbergResult:
    ratio: ConditionConstant
    exp_constant: float
    bmo: float
    dimension: int

    @property
    def scale_factor(self):
        return 2.0 ** (self.dimension + 2)

    @property
    def within_bound(self):
        return self.ratio.value <= self.exp_constant * self.scale_factor

    def to_record(self):
        return self.ratio.to_record(
            bmo=self.bmo, c_n=self.exp_constant, bound=self.exp_constant * self.scale_factor,
            within_bound=self.within_bound,
        )


def john_nirenberg_check(b, scan):
    norm = float(bmo_norm(b, scan))
    if norm == 0:
        # constant symbols: every oscillation vanishes
        zero = ConditionConstant(0.0, {}, scan.cube(0), len(scan))
        return JohnNirenbergResult(zero, 0.0, 0.0, b.dimension)
    lam = 2.0 ** (b.dimension + 2) * norm

    def both(cube):
        deviation, mass = _oscillation(b, cube)
        return luxemburg(deviation, mass, EXP_L) / norm, float(np.sum(mass * np.exp(deviation / lam)))

    pairs = np.atleast_2d(scan.map_cubes(both))
    ratio = scan.reduce(pairs[:, 0])
    c_n = float(np.max(pairs[:, 1]))
    logger.info("John-Nirenberg ratio %.4g with measured c_n %.4g", ratio.value, c_n)
    return JohnNirenbergResult(ratio, c_n if math.isfinite(c_n) else math.inf, norm, b.dimension)


# Example use case
if __name__ == "__main__":
    from ..signal.families import sign_function
    from .cube_scan import CubeScan

    b = sign_function(1, 1, 6)
    scan = CubeScan.for_function(b)
    print(float(bmo_norm(b, scan)), john_nirenberg_check(b, scan).to_record())
