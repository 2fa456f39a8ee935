# "src/signal/grid_function.py"

## Implements the `GridFunction` class, a piecewise-constant function on the truncated mesh
## [-W, W)^n with W = 2^L0 and cell side h = 2^-L. It provides:
## - Construction from values, from a sampled callable, as a constant or an indicator
## - Symbolic power weights |x|^a whose cells hold exact cell averages; +inf marks the cells of
##   a non-integrable power weight and is refused in values built from raw data
## - Exact integrals and averages over arbitrary cubes (prefix table + multilinear interpolation)
## - Restriction to a cube (cell values with their overlap volumes) for nonlinear functionals
## - Elementwise arithmetic, powers and weighted L^p norms

import logging

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .power_integrals import cell_power_averages

logger = logging.getLogger(__name__)

MAX_CELLS = {1: 1 << 16, 2: 1 << 20}


def _mesh_size(dimension, half_width_level, level):
    return 2 ** (half_width_level + 1 + level)


class GridFunction:
    def __init__(self, values, dimension=1, half_width_level=2, level=10, power_exponent=None, singular=False):
        if dimension not in (1, 2):
            raise ValueError(f"dimension must be 1 or 2, got {dimension}")
        size = _mesh_size(dimension, half_width_level, level)
        if size ** dimension > MAX_CELLS[dimension]:
            raise ValueError(f"mesh with {size ** dimension} cells exceeds the desk-scale limit")
        values = np.array(values, dtype=float)
        if values.shape != (size,) * dimension:
            raise ValueError(f"expected values of shape {(size,) * dimension}, got {values.shape}")
        if np.any(np.isnan(values)) or np.any(np.isneginf(values)):
            raise ValueError("cell values must be finite (or +inf on non-integrable singular cells)")
        # +inf only on power weights and on values derived from existing grid functions (`like`)
        if power_exponent is None and not singular and np.any(np.isposinf(values)):
            raise ValueError("+inf cells are reserved for non-integrable power weights")
        values.setflags(write=False)

        self.dimension = dimension
        self.half_width_level = half_width_level
        self.level = level
        self.power_exponent = power_exponent
        self.values = values
        self.size = size
        self.half_width = float(2.0 ** half_width_level)
        self.h = float(2.0 ** -level)
        self.cell_volume = self.h ** dimension
        self.edges = -self.half_width + self.h * np.arange(size + 1)

        singular = np.isinf(values)
        self.singular_cells = np.argwhere(singular)
        finite = np.where(singular, 0.0, values)
        self._interpolator = self._build_prefix(finite)

    # -- construction -------------------------------------------------------------------

    @classmethod
    def from_function(cls, func, dimension=1, half_width_level=2, level=10):
        blank = cls.zeros(dimension, half_width_level, level)
        values = func(*blank.center_coordinates())
        return cls(np.broadcast_to(values, blank.values.shape), dimension, half_width_level, level)

    @classmethod
    def zeros(cls, dimension=1, half_width_level=2, level=10):
        size = _mesh_size(dimension, half_width_level, level)
        return cls(np.zeros((size,) * dimension), dimension, half_width_level, level)

    @classmethod
    def constant(cls, c, dimension=1, half_width_level=2, level=10):
        size = _mesh_size(dimension, half_width_level, level)
        # the constant 1 is |x|^0, so its powers stay symbolic
        tag = 0.0 if c == 1 else None
        return cls(np.full((size,) * dimension, float(c)), dimension, half_width_level, level, tag)

    @classmethod
    def indicator(cls, cube, dimension=1, half_width_level=2, level=10):
        blank = cls.zeros(dimension, half_width_level, level)
        inside = np.ones(blank.values.shape, dtype=bool)
        lo, hi = cube.bounds()
        for axis, coords in enumerate(blank.center_coordinates()):
            inside &= (coords >= lo[axis]) & (coords < hi[axis])
        return cls(inside.astype(float), dimension, half_width_level, level)

    @classmethod
    def power_weight(cls, exponent, dimension=1, half_width_level=2, level=10):
        """|x|^a with every cell holding its exact cell average (tagged for closed-form powers)."""
        size = _mesh_size(dimension, half_width_level, level)
        if exponent == 0:
            return cls(np.ones((size,) * dimension), dimension, half_width_level, level, 0.0)
        edges = -2.0 ** half_width_level + 2.0 ** -level * np.arange(size + 1)
        values = cell_power_averages(edges, dimension, float(exponent))
        if np.any(np.isinf(values)):
            logger.warning("|x|^%g is not locally integrable; origin cells carry +inf", exponent)
        return cls(values, dimension, half_width_level, level, float(exponent))

    def like(self, values, power_exponent=None):
        return GridFunction(values, self.dimension, self.half_width_level, self.level, power_exponent, singular=True)

    # -- geometry -----------------------------------------------------------------------

    def centers(self):
        return self.edges[:-1] + 0.5 * self.h

    def center_coordinates(self):
        c = self.centers()
        if self.dimension == 1:
            return (c,)
        return tuple(np.meshgrid(c, c, indexing="ij"))

    def center_points(self):
        """Cell centers as an array of shape (cells, n) in row-major order."""
        return np.stack([axis.ravel() for axis in self.center_coordinates()], axis=1)

    def same_mesh(self, other):
        return (
            self.dimension == other.dimension
            and self.half_width_level == other.half_width_level
            and self.level == other.level
        )

    def _require_same_mesh(self, other):
        if not self.same_mesh(other):
            raise ValueError("grid functions live on different meshes")

    # -- prefix sums and averages ---------------------------------------------------------

    def _build_prefix(self, finite):
        prefix = finite * self.cell_volume
        for axis in range(self.dimension):
            prefix = np.cumsum(prefix, axis=axis)
        prefix = np.pad(prefix, [(1, 0)] * self.dimension)
        nodes = (self.edges,) * self.dimension
        return RegularGridInterpolator(nodes, prefix, method="linear", bounds_error=False, fill_value=None)

    def integrals(self, corners, sides):
        """Integral over each cube (corners: (K, n), sides: (K,)); exact for the cell representative."""
        corners = np.atleast_2d(np.asarray(corners, dtype=float))
        sides = np.atleast_1d(np.asarray(sides, dtype=float))
        W = self.half_width
        lo = np.clip(corners, -W, W)
        hi = np.clip(corners + sides[:, None], -W, W)
        empty = np.any(hi <= lo, axis=1)
        total = np.zeros(len(sides))
        for signs in np.ndindex(*(2,) * self.dimension):
            point = np.where(np.array(signs, dtype=bool)[None, :], hi, lo)
            parity = (-1) ** (self.dimension - sum(signs))
            total += parity * self._interpolator(point)
        total[empty] = 0.0
        if len(self.singular_cells):
            touched = self._singular_overlap(lo, hi) > 0
            total[touched & ~empty] = np.inf
        return total

    def _singular_overlap(self, lo, hi):
        overlap = np.zeros(len(lo))
        for cell in self.singular_cells:
            cell_lo = self.edges[cell]
            cell_hi = cell_lo + self.h
            span = np.clip(np.minimum(hi, cell_hi) - np.maximum(lo, cell_lo), 0.0, None)
            overlap += np.prod(span, axis=1)
        return overlap

    def averages(self, corners, sides):
        sides = np.atleast_1d(np.asarray(sides, dtype=float))
        return self.integrals(corners, sides) / sides ** self.dimension

    def integral(self, cube):
        return float(self.integrals([cube.corner], [cube.side])[0])

    def average(self, cube):
        if not cube.volume > 0:
            raise ValueError("average over a zero-volume cube")
        return self.integral(cube) / cube.volume

    def total_integral(self):
        if len(self.singular_cells):
            return np.inf
        return float(np.sum(self.values) * self.cell_volume)

    # -- restriction ----------------------------------------------------------------------

    def _axis_overlap(self, lo, hi):
        first = int(np.clip(np.floor((lo + self.half_width) / self.h), 0, self.size))
        last = int(np.clip(np.ceil((hi + self.half_width) / self.h), 0, self.size))
        cell_lo = self.edges[first:last]
        lengths = np.clip(np.minimum(hi, cell_lo + self.h) - np.maximum(lo, cell_lo), 0.0, None)
        return slice(first, last), lengths

    def restrict(self, cube):
        """Cell values meeting the cube with their overlap volumes, plus the volume outside the box."""
        lo, hi = cube.bounds()
        slices, lengths = [], []
        for axis in range(self.dimension):
            sl, ln = self._axis_overlap(lo[axis], hi[axis])
            slices.append(sl)
            lengths.append(ln)
        block = self.values[tuple(slices)]
        weights = lengths[0] if self.dimension == 1 else np.outer(lengths[0], lengths[1])
        values, weights = block.ravel(), weights.ravel()
        keep = weights > 0
        outside = max(cube.volume - float(np.sum(weights)), 0.0)
        return values[keep], weights[keep], outside

    def max_on(self, cube):
        values, _, outside = self.restrict(cube)
        top = float(np.max(values)) if len(values) else 0.0
        return max(top, 0.0) if outside > 0 else top

    def min_on(self, cube):
        values, _, outside = self.restrict(cube)
        bottom = float(np.min(values)) if len(values) else 0.0
        return min(bottom, 0.0) if outside > 0 else bottom

    # -- arithmetic -----------------------------------------------------------------------

    def _combine(self, other, op):
        if isinstance(other, GridFunction):
            self._require_same_mesh(other)
            other = other.values
        with np.errstate(invalid="ignore"):
            out = op(self.values, other)
        return self.like(np.nan_to_num(out, nan=0.0, posinf=np.inf))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self.like(other - self.values)

    def __mul__(self, other):
        if (
            isinstance(other, GridFunction)
            and self.power_exponent is not None
            and other.power_exponent is not None
        ):
            self._require_same_mesh(other)
            return self.power_weight_like(self.power_exponent + other.power_exponent)
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, GridFunction):
            return self * other.power(-1.0)
        return self._combine(1.0 / other, np.multiply)

    def __neg__(self):
        return self.like(-self.values)

    def __abs__(self):
        return self.like(np.abs(self.values), self.power_exponent)

    def power_weight_like(self, exponent):
        return GridFunction.power_weight(exponent, self.dimension, self.half_width_level, self.level)

    def power(self, c):
        """Elementwise |f|^c; symbolic power weights stay exact."""
        if self.power_exponent is not None:
            return self.power_weight_like(self.power_exponent * c)
        with np.errstate(divide="ignore", over="ignore"):
            out = np.abs(self.values) ** c
        if c < 0 and np.any(self.values == 0):
            logger.warning("negative power of a grid function with zero cells; those cells set to +inf")
        return self.like(out)

    def untagged(self):
        return self.like(self.values)

    def clipped(self, cap):
        return self.like(np.minimum(self.values, cap))

    # -- norms ----------------------------------------------------------------------------

    def lp_norm(self, p, weight=None):
        return lp_norm(self, p, weight)

    def is_positive(self):
        return bool(np.all(self.values > 0))

    def __repr__(self):
        tag = f", |x|^{self.power_exponent:g}" if self.power_exponent is not None else ""
        return f"GridFunction(n={self.dimension}, L0={self.half_width_level}, L={self.level}{tag})"


def average(f, cube):
    return f.average(cube)


def lp_norm(f, p, weight=None):
    """(sum |f|^p w h^n)^(1/p)."""
    if not p > 0:
        raise ValueError(f"p must be positive, got {p}")
    terms = np.abs(f.values) ** p
    if weight is not None:
        f._require_same_mesh(weight)
        with np.errstate(invalid="ignore"):
            terms = terms * weight.values
        terms = np.nan_to_num(terms, nan=0.0, posinf=np.inf)
    return float(np.sum(terms) * f.cell_volume) ** (1.0 / p)


def discrete_holder(a, b, c, p1, p2, p3):
    """Both sides of sum a b c <= ||a||_p1 ||b||_p2 ||c||_p3 for nonnegative sequences."""
    a, b, c = (np.abs(np.asarray(v, dtype=float)) for v in (a, b, c))
    if not (p1 > 1 and p2 > 1 and p3 > 0):
        raise ValueError("requires p1, p2 > 1 and p3 > 0")
    if not (1 / p1 + 1 / p2 < 1 <= 1 / p1 + 1 / p2 + 1 / p3):
        raise ValueError("requires 1/p1 + 1/p2 < 1 <= 1/p1 + 1/p2 + 1/p3")
    lhs = float(np.sum(a * b * c))
    rhs = float(
        np.sum(a ** p1) ** (1 / p1) * np.sum(b ** p2) ** (1 / p2) * np.sum(c ** p3) ** (1 / p3)
    )
    return lhs, rhs
