# "src/operators/kernels.py"

## Kernel tables K_j = ∫_{cell j} |y|^{alpha - n} dy over the y-cells [(j - 1/2) h, (j + 1/2) h)^n,
## integrated exactly (closed form for n = 1, Gauss-Legendre with subdivision at the origin for n = 2),
## and the shifted-slice loop out[i] = Σ_j f[i - j] g[i + j] K_j that every bilinear operator shares.

import logging
from functools import lru_cache

import numpy as np
from joblib import Parallel, delayed

from ..errors import ValidationError
from ..signal.power_integrals import box_integrals, interval_integrals

logger = logging.getLogger(__name__)

# the offsets are always split into this many chunks so the sum order never depends on threads
OFFSET_CHUNKS = 8


def reach(size):
    """Largest offset |j| for which both i - j and i + j stay on a mesh of `size` cells."""
    return (size - 1) // 2


def require_order(alpha, dimension):
    if not 0 < alpha < dimension:
        raise ValidationError(f"the fractional order must lie in (0, {dimension}), got {alpha}")


def require_inputs(*functions):
    first = functions[0]
    for f in functions:
        if not f.same_mesh(first):
            raise ValidationError("operator inputs must live on the same mesh")
        if not np.all(np.isfinite(f.values)):
            raise ValidationError("operator inputs must have finite cell values")


@lru_cache(maxsize=16)
def _kernel_table(dimension, alpha, level, extent):
    h = 2.0 ** -level
    offsets = np.arange(-extent, extent + 1)
    lo, hi = (offsets - 0.5) * h, (offsets + 0.5) * h
    e = alpha - dimension
    if dimension == 1:
        table = interval_integrals(lo, hi, e)
    else:
        X0, Y0 = np.meshgrid(lo, lo, indexing="ij")
        X1, Y1 = np.meshgrid(hi, hi, indexing="ij")
        table = box_integrals(X0, X1, Y0, Y1, e).reshape(X0.shape)
    table.setflags(write=False)
    logger.debug("kernel table n=%d alpha=%g with %d cells", dimension, alpha, table.size)
    return table


def kernel_weights(dimension, alpha, level, extent):
    """K indexed by j + extent along every axis."""
    require_order(alpha, dimension)
    return _kernel_table(int(dimension), float(alpha), int(level), int(extent))


def offset_slices(offset, size):
    """(out, minus, plus) slice tuples with out[i] paired to f[i - j] and g[i + j]."""
    out, minus, plus = [], [], []
    for j in offset:
        a = abs(j)
        out.append(slice(a, size - a))
        minus.append(slice(a - j, size - a - j))
        plus.append(slice(a + j, size - a + j))
    return tuple(out), tuple(minus), tuple(plus)


def offsets(dimension, extent):
    axis = np.arange(-extent, extent + 1)
    grid = np.meshgrid(*(axis,) * dimension, indexing="ij")
    return np.stack([g.ravel() for g in grid], axis=1)


def _partial_sum(term, chunk, shape, size):
    out = np.zeros(shape)
    for offset in chunk:
        sl_out, sl_minus, sl_plus = offset_slices(offset, size)
        contribution = term(offset, sl_out, sl_minus, sl_plus)
        if contribution is not None:
            out[(Ellipsis,) + sl_out] += contribution
    return out


def shifted_sum(term, shape, size, dimension, threads=1):
    """Σ over offsets j of term(j, out, minus, plus), placed on the `out` slice of an array of `shape`."""
    all_offsets = offsets(dimension, reach(size))
    chunks = [c for c in np.array_split(all_offsets, OFFSET_CHUNKS) if len(c)]
    if threads > 1:
        parts = Parallel(n_jobs=threads, prefer="threads")(
            delayed(_partial_sum)(term, chunk, shape, size) for chunk in chunks
        )
    else:
        parts = [_partial_sum(term, chunk, shape, size) for chunk in chunks]
    total = np.zeros(shape)
    for part in parts:
        total += part
    return total


# Example use case
if __name__ == "__main__":
    table = kernel_weights(1, 0.5, 4, 3)
    print(table, table.sum(), 2 * (3.5 / 16) ** 0.5 / 0.5)
