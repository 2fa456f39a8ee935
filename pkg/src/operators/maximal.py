# "src/operators/maximal.py"

## The Orlicz fractional maximal operators evaluated at cell centers:
## - m_orlicz_alpha(f, g, Phi, Psi, alpha) = sup_{Q ∋ x} |Q|^{alpha/n} ||f||_{Phi,Q} ||g||_{Psi,Q}
## - m_orlicz(f, Phi) = sup_{Q ∋ x} ||f||_{Phi,Q}
## The sup runs over the cubes of an intersecting `CubeScan` plus the cubes centered at each cell
## center with sides 2h, 4h, ..., 4W, or over one shifted dyadic grid when `grid` is given.
## Phi = None stands for the plain average (Phi(t) = t); powers use prefix-table averages of |f|^p.

import logging

import numpy as np

from ..dyadic.grid import DyadicGrid
from ..signal.exponents import TOLERANCE
from ..weights.cube_scan import CubeScan
from ..young.orlicz import orlicz_norm
from .bilinear import radii
from .kernels import require_inputs

logger = logging.getLogger(__name__)

# dyadic families reach this many levels above the box so every scan cube has a cover in some grid
COARSE_MARGIN = 5


def centered_family(f, threads=1):
    """Cubes [x - r, x + r)^n around every cell center x, r in {h, 2h, ..., 2W}."""
    centers = f.center_points()
    corners, sides, scales = [], [], []
    for R in radii(f):
        r = R * f.h
        corners.append(centers - r)
        sides.append(np.full(len(centers), 2.0 * r))
        scales.append(np.full(len(centers), f.level - int(np.log2(R)) - 1))
    return CubeScan.from_arrays(
        f, np.concatenate(corners), np.concatenate(sides), np.concatenate(scales), threads
    )


def dyadic_family(grid, f, threads=1):
    """Cubes of the shifted dyadic grid meeting the box, levels -(L0 + COARSE_MARGIN) .. L."""
    if grid.dimension != f.dimension:
        raise ValueError("grid dimension does not match the mesh")
    W = f.half_width
    corners, sides, scales = [], [], []
    for level in range(-(f.half_width_level + COARSE_MARGIN), f.level + 1):
        block = grid.corners_meeting(level, (-W,) * f.dimension, (W,) * f.dimension)
        corners.append(block)
        sides.append(np.full(len(block), 2.0 ** -level))
        scales.append(np.full(len(block), level))
    return CubeScan.from_arrays(
        f, np.concatenate(corners), np.concatenate(sides), np.concatenate(scales), threads
    )


def cube_norms(f, phi, scan):
    """||f||_{Phi,Q} for every scan cube."""
    if phi is None:
        return scan.averages(abs(f))
    if phi.family == "power":
        p = phi.params[0]
        with np.errstate(invalid="ignore"):
            return np.maximum(scan.averages(f.power(p)), 0.0) ** (1.0 / p)
    return scan.map_cubes(lambda cube: orlicz_norm(f, cube, phi))


def _families(f, grid, scan, centered, threads):
    if grid is not None:
        return [dyadic_family(grid, f, threads)]
    families = [scan if scan is not None else CubeScan.for_function(f, contained=False, threads=threads)]
    if centered:
        families.append(centered_family(f, threads))
    return families


def _pointwise(f, families, cube_values):
    out = np.zeros(f.values.shape)
    for family in families:
        out = np.maximum(out, family.pointwise_max(cube_values(family), f))
    return f.like(out)


def m_orlicz_alpha(f, g, phi, psi, alpha, grid=None, scan=None, centered=True, threads=1):
    require_inputs(f, g)
    if not 0 <= alpha < f.dimension:
        raise ValueError(f"alpha must lie in [0, {f.dimension}), got {alpha}")

    def cube_values(family):
        size = family.volumes() ** (alpha / f.dimension) if alpha > TOLERANCE else 1.0
        with np.errstate(invalid="ignore"):
            return size * cube_norms(f, phi, family) * cube_norms(g, psi, family)

    result = _pointwise(f, _families(f, grid, scan, centered, threads), cube_values)
    logger.debug(
        "M_%g with (%s, %s) over %s", alpha, phi or "t", psi or "t", grid.label if grid else "scan"
    )
    return result


def m_orlicz(f, phi, grid=None, scan=None, centered=True, threads=1):
    require_inputs(f)
    return _pointwise(
        f, _families(f, grid, scan, centered, threads), lambda family: cube_norms(f, phi, family)
    )


def shifted_grid_sum(f, g, phi, psi, alpha, threads=1):
    """Σ over the 2^n shifted grids of the dyadic maximal operators."""
    total = np.zeros(f.values.shape)
    for grid in DyadicGrid.all_shifts(f.dimension):
        total += m_orlicz_alpha(f, g, phi, psi, alpha, grid=grid, threads=threads).values
    return f.like(total)


# Example use case
if __name__ == "__main__":
    from ..dyadic.cube import Cube
    from ..signal.grid_function import GridFunction
    from ..young.young_function import YoungFunction

    f = GridFunction.indicator(Cube((0.0,), 1.0), 1, 1, 6)
    two = YoungFunction.power(2.0)
    print(float(np.max(m_orlicz_alpha(f, f, two, two, 0.5).values)))
    print(float(np.max(m_orlicz(f, None).values)))
