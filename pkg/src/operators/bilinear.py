# "src/operators/bilinear.py"

## The bilinear fractional integral and the associated maximal operator on the mesh:
## - bi_alpha(f, g): BI_alpha(f, g)(x) = ∫ f(x - y) g(x + y) |y|^{alpha - n} dy at every cell center,
##   f and g read at the displaced cell centers, the kernel integrated exactly per y-cell
## - bi_alpha_at(f, g, x): the same integral at an arbitrary point, exact for the cell representatives
## - bm(f, g): sup over r in {h, 2h, ..., 2W} of (2r)^{-n} ∫_{[-r, r]^n} |f(x - y) g(x + y)| dy
## Contributions that need f or g outside the box are zero.

import logging

import numpy as np

from ..signal.power_integrals import box_integrals, interval_integrals
from .kernels import kernel_weights, reach, require_inputs, require_order, shifted_sum

logger = logging.getLogger(__name__)


def bi_alpha(f, g, alpha, threads=1):
    require_inputs(f, g)
    require_order(alpha, f.dimension)
    extent = reach(f.size)
    table = kernel_weights(f.dimension, alpha, f.level, extent)
    fv, gv = f.values, g.values

    def term(offset, out, minus, plus):
        return fv[minus] * gv[plus] * table[tuple(offset + extent)]

    values = shifted_sum(term, fv.shape, f.size, f.dimension, threads)
    logger.debug("BI_%g evaluated on %d cells", alpha, values.size)
    return f.like(values)


def _lookup(f, indices):
    valid = [(ix >= 0) & (ix < f.size) for ix in indices]
    clipped = [np.clip(ix, 0, f.size - 1) for ix in indices]
    values = f.values[np.ix_(*clipped)]
    mask = valid[0] if f.dimension == 1 else np.outer(valid[0], valid[1])
    return np.where(mask, values, 0.0)


def bi_alpha_at(f, g, alpha, point):
    """BI_alpha(f, g) at one point, splitting y-space wherever f(x - y) or g(x + y) changes cell."""
    require_inputs(f, g)
    require_order(alpha, f.dimension)
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if point.shape != (f.dimension,):
        raise ValueError("point dimension does not match the mesh")
    W, h = f.half_width, f.h
    lows, highs, minus, plus = [], [], [], []
    for x in point:
        breaks = np.unique(np.concatenate([x - f.edges, f.edges - x]))
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        lows.append(breaks[:-1])
        highs.append(breaks[1:])
        minus.append(np.floor((x - mids + W) / h).astype(int))
        plus.append(np.floor((x + mids + W) / h).astype(int))
    product = _lookup(f, minus) * _lookup(g, plus)
    nonzero = np.nonzero(product)
    if not len(nonzero[0]):
        return 0.0
    e = alpha - f.dimension
    if f.dimension == 1:
        (i,) = nonzero
        kernel = interval_integrals(lows[0][i], highs[0][i], e)
    else:
        i, j = nonzero
        kernel = box_integrals(lows[0][i], highs[0][i], lows[1][j], highs[1][j], e)
    return float(np.sum(product[nonzero] * kernel))


def radii(f):
    """The radius set {h, 2h, ..., 2W} in cell units."""
    return 2 ** np.arange(int(round(np.log2(f.size))) + 1)


def bm(f, g, threads=1):
    require_inputs(f, g)
    fv, gv = f.values, g.values
    n = f.dimension
    R = radii(f)
    shape = (len(R),) + fv.shape
    broadcast = (-1,) + (1,) * n

    def term(offset, out, minus, plus):
        a = np.abs(offset)
        # overlap of y-cell j with [-r, r]^n: full inside, half on the boundary shell
        weights = np.where(a[None, :] < R[:, None], 1.0, np.where(a[None, :] == R[:, None], 0.5, 0.0))
        weights = np.prod(weights, axis=1)
        if not np.any(weights):
            return None
        return weights.reshape(broadcast) * np.abs(fv[minus] * gv[plus])[None]

    sums = shifted_sum(term, shape, f.size, n, threads) * f.cell_volume
    averages = sums / ((2.0 * R * f.h) ** n).reshape(broadcast)
    return f.like(np.max(averages, axis=0))


def trilinear_form(f, g, h, alpha, beta, gamma1, gamma2, threads=1):
    """∫ h(x) |x|^{-beta} BI_alpha(f |.|^{-gamma1}, g |.|^{-gamma2})(x) dx over the box."""
    require_inputs(f, g, h)
    lifted_f = f * f.power_weight_like(-gamma1)
    lifted_g = g * g.power_weight_like(-gamma2)
    integrand = h * h.power_weight_like(-beta) * bi_alpha(lifted_f, lifted_g, alpha, threads)
    return integrand.total_integral()


# Example use case
if __name__ == "__main__":
    from ..dyadic.cube import Cube
    from ..signal.grid_function import GridFunction

    f = GridFunction.indicator(Cube((0.0,), 1.0), 1, 1, 8)
    print(bi_alpha_at(f, f, 0.5, 0.5), 2 * np.sqrt(2))
    print(float(np.max(bm(f, f).values)))
