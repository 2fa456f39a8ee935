# "src/dyadic/grid.py"

## Shifted dyadic grids D^t = {2^{-k}([0,1)^n + m + (-1)^k t)} with t in {0, 1/3}^n:
## - Locating the level-k cube that contains a point (exact rational arithmetic)
## - Parent / children navigation for addressed cubes
## - Enumerating the level-k cubes that meet a box
## - The covering lemma: every cube sits inside a grid cube at most six times larger

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from ..errors import GridMembershipError, NumericFailure
from .cube import Cube, CubeAddress, dyadic_side

logger = logging.getLogger(__name__)

THIRD = Fraction(1, 3)
COVER_FACTOR = 6


def _exact(value):
    if isinstance(value, Fraction):
        return value
    return Fraction(float(value))


@dataclass(frozen=True)
class DyadicGrid:
    dimension: int
    shift: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {self.dimension}")
        shift = tuple(Fraction(t) for t in self.shift)
        if len(shift) != self.dimension:
            raise ValueError("shift length must match the dimension")
        if any(t not in (0, THIRD) for t in shift):
            raise ValueError(f"shift entries must be 0 or 1/3, got {shift}")
        object.__setattr__(self, "shift", shift)

    @classmethod
    def standard(cls, dimension):
        return cls(dimension, (Fraction(0),) * dimension)

    @classmethod
    def all_shifts(cls, dimension):
        """The 2^n grids, in lexicographic order of t (0 before 1/3)."""
        return [cls(dimension, t) for t in itertools.product((Fraction(0), THIRD), repeat=dimension)]

    @classmethod
    def from_label(cls, label, dimension):
        # "t0" / "t1" broadcast over axes; "t01" gives one digit per axis, 1 meaning 1/3
        digits = label[1:] if label.startswith("t") else label
        if not digits or any(d not in "01" for d in digits):
            raise ValueError(f"unknown grid label {label!r}")
        if len(digits) == 1:
            digits = digits * dimension
        if len(digits) != dimension:
            raise ValueError(f"grid label {label!r} does not match dimension {dimension}")
        return cls(dimension, tuple(THIRD if d == "1" else Fraction(0) for d in digits))

    @property
    def label(self):
        return "t" + "".join("1" if t else "0" for t in self.shift)

    def _offset(self, level):
        sign = 1 if level % 2 == 0 else -1
        return tuple(sign * t for t in self.shift)

    def cube(self, level, coords):
        address = CubeAddress(self.shift, int(level), tuple(int(m) for m in coords))
        return Cube.from_address(address)

    def cube_at(self, level, point):
        if isinstance(point, (int, float, Fraction)):
            point = (point,)
        point = tuple(point)
        if len(point) != self.dimension:
            raise ValueError("point dimension does not match the grid")
        scale = dyadic_side(-level)  # 2^k
        coords = tuple(
            math.floor(_exact(x) * scale - t) for x, t in zip(point, self._offset(level))
        )
        return self.cube(level, coords)

    def owns(self, cube):
        return cube.address is not None and cube.address.shift == self.shift

    def parent(self, cube):
        self._require_member(cube)
        return self.cube_at(cube.address.level - 1, cube.exact_corner)

    def children(self, cube):
        self._require_member(cube)
        level = cube.address.level + 1
        quarter = cube.exact_side / 4
        corner = cube.exact_corner
        result = []
        for offsets in itertools.product((1, 3), repeat=self.dimension):
            point = tuple(c + o * quarter for c, o in zip(corner, offsets))
            result.append(self.cube_at(level, point))
        return result

    def cubes_meeting(self, level, lo, hi):
        """Level-`level` cubes intersecting the half-open box [lo, hi)."""
        scale = dyadic_side(-level)
        ranges = []
        for a, b, t in zip(lo, hi, self._offset(level)):
            first = math.floor(_exact(a) * scale - t)
            last = math.ceil(_exact(b) * scale - t) - 1
            ranges.append(range(first, last + 1))
        return [self.cube(level, coords) for coords in itertools.product(*ranges)]

    def corners_meeting(self, level, lo, hi):
        """Float corners of the level-`level` cubes meeting [lo, hi), as an array of shape (K, n)."""
        scale = dyadic_side(-level)
        axes = []
        for a, b, t in zip(lo, hi, self._offset(level)):
            first = math.floor(_exact(a) * scale - t)
            last = math.ceil(_exact(b) * scale - t) - 1
            axes.append((np.arange(first, last + 1) + float(t)) / float(scale))
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([axis.ravel() for axis in mesh], axis=1)

    def _require_member(self, cube):
        if not self.owns(cube):
            raise GridMembershipError(f"{cube!r} is not addressed in grid {self.label}")


def grid_of(cube):
    if cube.address is None:
        raise GridMembershipError(f"{cube!r} carries no dyadic address")
    return DyadicGrid(cube.dimension, cube.address.shift)


def cube_at(grid, level, point):
    return grid.cube_at(level, point)


def parent(cube):
    return grid_of(cube).parent(cube)


def children(cube):
    return grid_of(cube).children(cube)


def finest_level_containing(side):
    """Largest k with 2^{-k} >= side."""
    side = _exact(side)
    level = math.floor(-math.log2(float(side)))
    while dyadic_side(level) < side:
        level -= 1
    while dyadic_side(level + 1) >= side:
        level += 1
    return level


def lerner_cover(q):
    """Shift t and a cube of D^t containing q with side at most six times side(q)."""
    limit = COVER_FACTOR * q.exact_side
    start = finest_level_containing(q.exact_side)
    for grid in DyadicGrid.all_shifts(q.dimension):
        level = start
        while dyadic_side(level) <= limit:
            candidate = grid.cube_at(level, q.exact_corner)
            if candidate.contains(q):
                logger.debug("cover of %r: grid %s, %r", q, grid.label, candidate)
                return grid.shift, candidate
            level -= 1
    raise NumericFailure(f"no dyadic cover found for {q!r}")


# Example use case
if __name__ == "__main__":
    grid = DyadicGrid.all_shifts(1)[1]
    print(grid.cube_at(0, (0.0,)))
    print(lerner_cover(Cube((-0.1,), 1.0)))
