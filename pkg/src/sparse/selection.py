# "src/sparse/selection.py"

## Implements the Calderón-Zygmund level-set selection `cz_select` and the `SparseFamily` it builds:
## - A top-down walk of one shifted dyadic grid from roots eight box-widths wide down to the mesh
##   level, evaluating F(Q) = [|Q|^{alpha/n}] ||f||_{Phi,Q} ||g||_{Psi,Q} level by level
## - Q is selected at level k when F(Q) > a^k while every ancestor has F <= a^k
## - Carved sets E_j^k = Q_j^k minus the level k+1 selections, with exact volumes and cell masks
## - Invariant checks (disjointness, maximality, |Q| <= 2|E|) and a JSON dump for inspection

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..dyadic.cube import Cube
from ..dyadic.grid import DyadicGrid
from ..errors import ValidationError
from ..operators.maximal import cube_norms
from ..weights.cube_scan import CubeScan

logger = logging.getLogger(__name__)

# roots sit this many levels above the box, so their functional is below every attainable threshold
ROOT_MARGIN = 3


@dataclass
class SelectedCube:
    k: int
    cube: Cube
    value: float
    carved_volume: float = 0.0
    walk_index: int = -1

    @property
    def carved_ratio(self):
        return self.carved_volume / self.cube.volume

    def to_dict(self):
        return {
            "address": self.cube.address.to_dict() if self.cube.address is not None else None,
            "corner": list(self.cube.corner),
            "side": self.cube.side,
            "value": self.value,
            "carved_ratio": self.carved_ratio,
        }


@dataclass
class _Walk:
    corners: np.ndarray
    sides: np.ndarray
    levels: np.ndarray
    values: np.ndarray
    ancestor_max: np.ndarray
    parents: np.ndarray


@dataclass
class SparseFamily:
    grid: DyadicGrid
    a: float
    mesh: object
    levels: Dict[int, List[SelectedCube]] = field(default_factory=dict)
    k_range: Optional[Tuple[int, int]] = None
    alpha: float = 0.0
    include_volume_factor: bool = False
    walk: Optional[_Walk] = None

    # -- access -----------------------------------------------------------------------------

    def __len__(self):
        return sum(len(cubes) for cubes in self.levels.values())

    def __iter__(self):
        for k in sorted(self.levels):
            yield from self.levels[k]

    @property
    def empty(self):
        return len(self) == 0

    def cubes(self, k):
        return self.levels.get(k, [])

    def band_of(self, value):
        """The k with a^k < value <= a^{k+1}."""
        if not value > 0:
            raise ValueError("only positive functionals fall in a band")
        return _largest_below(value, self.a)

    def containing_cube(self, cube, k):
        for selected in self.cubes(k):
            if selected.cube.contains(cube):
                return selected
        return None

    # -- masks ------------------------------------------------------------------------------

    def _cover(self, cubes):
        if not cubes:
            return np.zeros(self.mesh.values.shape, dtype=bool)
        corners = np.array([c.corner for c in cubes])
        sides = np.array([c.side for c in cubes])
        scan = CubeScan.from_arrays(self.mesh, corners, sides, np.zeros(len(cubes), dtype=int))
        return scan.pointwise_max(np.ones(len(cubes)), self.mesh) > 0

    def omega_mask(self, k):
        """Cells whose centers lie in the union of the level-k selections."""
        return self._cover([selected.cube for selected in self.cubes(k)])

    def carved_mask(self, k, j):
        return self._cover([self.levels[k][j].cube]) & ~self.omega_mask(k + 1)

    # -- invariants -------------------------------------------------------------------------

    def check_invariants(self, tolerance=1e-12):
        report = {"disjoint": True, "maximal": True, "carved_disjoint": True, "sparse": True}
        coverage = np.zeros(self.mesh.values.shape, dtype=int)
        worst = math.inf
        for k, cubes in self.levels.items():
            if _overlapping([selected.cube for selected in cubes]):
                report["disjoint"] = False
            threshold = self.a ** k
            for j, selected in enumerate(cubes):
                parent_max = self.walk.ancestor_max[selected.walk_index]
                if not (selected.value > threshold and parent_max <= threshold):
                    report["maximal"] = False
                worst = min(worst, selected.carved_ratio)
                coverage += self.carved_mask(k, j)
        report["carved_disjoint"] = bool(np.all(coverage <= 1))
        report["sparse"] = worst >= 0.5 - tolerance
        report["min_carved_ratio"] = worst if math.isfinite(worst) else None
        return report

    # -- output -----------------------------------------------------------------------------

    def to_dict(self):
        return {
            "grid": self.grid.label,
            "a": self.a,
            "alpha": self.alpha,
            "include_volume_factor": self.include_volume_factor,
            "k_range": list(self.k_range) if self.k_range else None,
            "levels": {str(k): [c.to_dict() for c in cubes] for k, cubes in sorted(self.levels.items())},
        }

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as handle:
                handle.write(text + "\n")
        return text


def _overlapping(cubes):
    if len(cubes) < 2:
        return False
    lo = np.array([c.corner for c in cubes])
    hi = lo + np.array([c.side for c in cubes])[:, None]
    meets = np.all((lo[:, None, :] < hi[None, :, :]) & (lo[None, :, :] < hi[:, None, :]), axis=2)
    np.fill_diagonal(meets, False)
    return bool(np.any(meets))


def _largest_below(value, a):
    """Largest integer k with a^k < value."""
    k = math.ceil(math.log(value) / math.log(a)) - 1
    while a ** (k + 1) < value:
        k += 1
    while a ** k >= value:
        k -= 1
    return k


def _smallest_at_least(value, a):
    """Smallest integer k with a^k >= value."""
    k = math.ceil(math.log(value) / math.log(a))
    while a ** (k - 1) >= value:
        k -= 1
    while a ** k < value:
        k += 1
    return k


def _functional(f, g, phi, psi, alpha, include_volume_factor, corners, sides, levels):
    scan = CubeScan.from_arrays(f, corners, sides, levels)
    with np.errstate(invalid="ignore"):
        values = cube_norms(f, phi, scan) * cube_norms(g, psi, scan)
    if include_volume_factor and alpha > 0:
        values = values * scan.volumes() ** (alpha / f.dimension)
    return np.nan_to_num(values, nan=0.0)


def _children(corners, sides, dimension):
    half = sides / 2.0
    offsets = np.array(np.meshgrid(*([0.0, 1.0],) * dimension, indexing="ij")).reshape(dimension, -1).T
    child_corners = (corners[:, None, :] + offsets[None, :, :] * half[:, None, None]).reshape(-1, dimension)
    count = len(offsets)
    return child_corners, np.repeat(half, count), count


def _walk(f, g, phi, psi, alpha, include_volume_factor, grid, depth):
    W = f.half_width
    top = -(f.half_width_level + ROOT_MARGIN)
    corners = grid.corners_meeting(top, (-W,) * f.dimension, (W,) * f.dimension)
    sides = np.full(len(corners), 2.0 ** -top)
    parents = np.full(len(corners), -1)
    ancestor = np.zeros(len(corners))
    records = {key: [] for key in ("corners", "sides", "levels", "values", "ancestor_max", "parents")}
    offset = 0
    for level in range(top, depth + 1):
        levels = np.full(len(sides), level)
        values = _functional(f, g, phi, psi, alpha, include_volume_factor, corners, sides, levels)
        for key, data in zip(records, (corners, sides, levels, values, ancestor, parents)):
            records[key].append(data)
        alive = np.flatnonzero(values > 0)
        logger.debug("level %d: %d cubes walked, %d alive", level, len(values), len(alive))
        if level == depth or not len(alive):
            break
        corners, sides, count = _children(corners[alive], sides[alive], f.dimension)
        parents = np.repeat(offset + alive, count)
        ancestor = np.repeat(np.maximum(ancestor[alive], values[alive]), count)
        offset += len(values)
    return _Walk(*(np.concatenate(records[key]) for key in records))


def cz_select(f, g, phi, psi, a, grid, alpha=0.0, include_volume_factor=False, depth=None):
    if not a > 1:
        raise ValidationError(f"the selection base a must exceed 1, got {a}")
    if not f.same_mesh(g):
        raise ValidationError("f and g must live on the same mesh")
    if np.any(f.values < 0) or np.any(g.values < 0):
        raise ValidationError("the selection needs nonnegative f and g")
    if not include_volume_factor:
        alpha = 0.0
    depth = f.level if depth is None else depth
    family = SparseFamily(grid, float(a), f, alpha=alpha, include_volume_factor=include_volume_factor)
    if not (np.any(f.values > 0) and np.any(g.values > 0)):
        logger.info("cz_select: zero input, empty family")
        return family

    walk = _walk(f, g, phi, psi, alpha, include_volume_factor, grid, depth)
    family.walk = walk
    roots = walk.parents < 0
    root_values = walk.values[roots & (walk.values > 0)]
    if not len(root_values):
        return family
    k_min = max(_largest_below(v, a) for v in root_values) + 1

    selected_at = {}
    for index in np.flatnonzero((walk.values > 0) & ~roots):
        k_hi = _largest_below(walk.values[index], a)
        parent_max = walk.ancestor_max[index]
        k_lo = _smallest_at_least(parent_max, a) if parent_max > 0 else k_min
        for k in range(max(k_lo, k_min), k_hi + 1):
            selected_at.setdefault(k, []).append(int(index))
    if not selected_at:
        return family

    for k in sorted(selected_at):
        cubes = []
        for index in selected_at[k]:
            side = float(walk.sides[index])
            center = tuple(float(c) + side / 2.0 for c in walk.corners[index])
            cube = grid.cube_at(int(walk.levels[index]), center)
            cubes.append(SelectedCube(k, cube, float(walk.values[index]), cube.volume, int(index)))
        family.levels[k] = cubes
    _carve(family, selected_at)
    family.k_range = (min(selected_at), max(selected_at))
    logger.info(
        "cz_select on %s with a=%g: %d cubes over k in [%d, %d]",
        grid.label, a, len(family), *family.k_range,
    )
    return family


def _carve(family, selected_at):
    """|E_j^k| = |Q_j^k| minus the volumes of the level k+1 selections inside it."""
    parents = family.walk.parents
    for k, indices in selected_at.items():
        position = {index: j for j, index in enumerate(indices)}
        for index in selected_at.get(k + 1, []):
            node = index
            while node >= 0 and node not in position:
                node = parents[node]
            if node < 0:
                continue
            owner = family.levels[k][position[node]]
            owner.carved_volume -= float(family.walk.sides[index]) ** family.mesh.dimension


# Example use case
if __name__ == "__main__":
    from ..signal.grid_function import GridFunction

    f = GridFunction.indicator(Cube((0.0,), 1.0), 1, 1, 6)
    family = cz_select(f, f, None, None, 4.0, DyadicGrid.standard(1))
    print(family.k_range, family.check_invariants())
    print(family.to_json())
