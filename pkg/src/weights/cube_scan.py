# "src/weights/cube_scan.py"

## Implements the `CubeScan` class, the finite family of cubes standing in for "sup over all cubes":
## - Cubes with dyadic sides 2^-j, j in [-L0, L], and corners on a lattice of spacing
##   max(h, side / density) (density 0 puts a corner on every mesh node)
## - Either cubes contained in the box [-W, W)^n (weight constants) or cubes meeting it (operators)
## - Optional seeded random off-mesh cubes
## - Parallel per-cube evaluation with joblib threads and the max-reduction into a
##   `ConditionConstant` (value, per-scale maxima, argmax cube)

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Optional

import numpy as np
from joblib import Parallel, delayed

from ..dyadic.cube import Cube
from ..errors import ResourceLimitError

logger = logging.getLogger(__name__)

DEFAULT_DENSITY = 4
MAX_SCAN_CUBES = 2_000_000
RANDOM_SCALE = -1 << 30


@dataclass
class ConditionConstant:
    value: float
    per_scale: Dict[int, float] = field(default_factory=dict)
    argmax: Optional[Cube] = None
    scan_size: int = 0

    def __float__(self):
        return float(self.value)

    @property
    def finite(self):
        return math.isfinite(self.value)

    def to_record(self, **extra):
        record = {
            "constant": self.value,
            "per_scale": {str(level): value for level, value in sorted(self.per_scale.items())},
            "argmax": self.argmax.to_dict() if self.argmax is not None else None,
            "scan_size": self.scan_size,
        }
        record.update(extra)
        return record


def _lattice(lo, hi, step):
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(max(count, 0))


class CubeScan:
    def __init__(
        self,
        dimension=1,
        half_width_level=2,
        level=10,
        density=DEFAULT_DENSITY,
        contained=True,
        random_count=0,
        seed=0,
        levels=None,
        threads=1,
    ):
        if density < 0:
            raise ValueError("scan density must be >= 0")
        self.dimension = dimension
        self.half_width_level = half_width_level
        self.level = level
        self.density = density
        self.contained = contained
        self.random_count = random_count
        self.seed = seed
        self.threads = max(int(threads), 1)
        self.levels = list(levels) if levels is not None else list(range(-half_width_level, level + 1))
        self.corners, self.sides, self.scales = self._build()
        if len(self.sides) == 0:
            raise ValueError("cube scan is empty")
        logger.debug("cube scan with %d cubes over levels %s", len(self.sides), self.levels)

    @classmethod
    def for_function(cls, f, **options):
        return cls(f.dimension, f.half_width_level, f.level, **options)

    @classmethod
    def from_arrays(cls, f, corners, sides, scales, threads=1):
        """A scan over an explicit cube family on f's mesh (centered or dyadic-grid cubes)."""
        scan = object.__new__(cls)
        scan.dimension = f.dimension
        scan.half_width_level = f.half_width_level
        scan.level = f.level
        scan.density = 0
        scan.contained = False
        scan.random_count = 0
        scan.seed = 0
        scan.threads = max(int(threads), 1)
        scan.corners = np.asarray(corners, dtype=float).reshape(-1, f.dimension)
        scan.sides = np.asarray(sides, dtype=float)
        scan.scales = np.asarray(scales, dtype=int)
        if len(scan.sides) == 0:
            raise ValueError("cube scan is empty")
        scan.levels = sorted(set(scan.scales.tolist()))
        return scan

    # -- construction -----------------------------------------------------------------------

    def _build(self):
        W = 2.0 ** self.half_width_level
        h = 2.0 ** -self.level
        corners, sides, scales = [], [], []
        total = 0
        for j in self.levels:
            side = 2.0 ** -j
            step = h if self.density == 0 else max(h, side / self.density)
            if self.contained:
                starts = _lattice(-W, W - side, step)
            else:
                starts = _lattice(-W - side + step, W - step, step)
            count = len(starts) ** self.dimension
            total += count
            if total > MAX_SCAN_CUBES:
                raise ResourceLimitError(
                    f"cube scan would exceed {MAX_SCAN_CUBES} cubes; lower the density or the level range"
                )
            grid = np.meshgrid(*(starts,) * self.dimension, indexing="ij")
            corners.append(np.stack([axis.ravel() for axis in grid], axis=1))
            sides.append(np.full(count, side))
            scales.append(np.full(count, j, dtype=int))
        if self.random_count:
            rng = np.random.default_rng(self.seed)
            rand_sides = 2.0 ** rng.uniform(-self.level, self.half_width_level, self.random_count)
            if self.contained:
                lo, span = np.full(self.random_count, -W), 2 * W - rand_sides
            else:
                lo, span = -W - rand_sides, 2 * W + rand_sides
            offsets = rng.random((self.random_count, self.dimension))
            corners.append(lo[:, None] + offsets * span[:, None])
            sides.append(rand_sides)
            scales.append(np.full(self.random_count, RANDOM_SCALE, dtype=int))
        return np.concatenate(corners), np.concatenate(sides), np.concatenate(scales)

    def _subset(self, mask):
        clone = object.__new__(CubeScan)
        clone.__dict__.update(self.__dict__)
        clone.corners, clone.sides, clone.scales = self.corners[mask], self.sides[mask], self.scales[mask]
        if len(clone.sides) == 0:
            raise ValueError("cube scan is empty")
        return clone

    def at_scale(self, j):
        """The mesh cubes of side 2^-j only."""
        return self._subset(self.scales == j)

    def mesh_only(self):
        return self._subset(self.scales != RANDOM_SCALE)

    # -- access -----------------------------------------------------------------------------

    def __len__(self):
        return len(self.sides)

    def cube(self, index):
        return Cube(tuple(self.corners[index]), float(self.sides[index]))

    def cubes(self):
        for index in range(len(self)):
            yield self.cube(index)

    def volumes(self):
        return self.sides ** self.dimension

    def averages(self, f):
        return f.averages(self.corners, self.sides)

    # -- evaluation -------------------------------------------------------------------------

    def _chunk(self, func, indices):
        return np.array([func(self.cube(i)) for i in indices], dtype=float)

    def map_cubes(self, func):
        """func(Cube) for every scan cube, split across joblib threads."""
        indices = np.arange(len(self))
        if self.threads == 1 or len(self) < 64:
            return self._chunk(func, indices)
        chunks = np.array_split(indices, self.threads * 4)
        parts = Parallel(n_jobs=self.threads, prefer="threads")(
            delayed(self._chunk)(func, chunk) for chunk in chunks
        )
        return np.concatenate(parts)

    def reduce(self, values):
        """Max over the scan with per-scale maxima; NaN (0 * inf) counts as +inf."""
        values = np.asarray(values, dtype=float)
        values = np.where(np.isnan(values), np.inf, values)
        index = int(np.argmax(values))
        per_scale = {}
        for j in np.unique(self.scales):
            if j != RANDOM_SCALE:
                per_scale[int(j)] = float(np.max(values[self.scales == j]))
        return ConditionConstant(float(values[index]), per_scale, self.cube(index), len(self))

    def maximize(self, func):
        return self.reduce(self.map_cubes(func))

    def pointwise_max(self, values, f):
        """At each cell of f's mesh, the largest per-cube value over scan cubes containing its center."""
        values = np.asarray(values, dtype=float)
        values = np.where(np.isnan(values), np.inf, values)
        W, h = f.half_width, f.h
        lo = np.clip(np.ceil((self.corners + W) / h - 0.5), 0, f.size).astype(int)
        hi = np.clip(np.ceil((self.corners + self.sides[:, None] + W) / h - 0.5), 0, f.size).astype(int)
        out = np.zeros(f.values.shape)
        # ascending order, so the last write on every cell is its maximum
        for k in np.argsort(values, kind="stable"):
            out[tuple(slice(a, b) for a, b in zip(lo[k], hi[k]))] = values[k]
        return out

    def __repr__(self):
        kind = "contained" if self.contained else "intersecting"
        return f"CubeScan({len(self)} {kind} cubes, levels {self.levels[0]}..{self.levels[-1]})"


# Example use case
if __name__ == "__main__":
    scan = CubeScan(1, 1, 4, random_count=10)
    print(scan, scan.cube(0), scan.cube(len(scan) - 1))
