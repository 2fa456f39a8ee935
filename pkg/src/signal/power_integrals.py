# "src/signal/power_integrals.py"

## Integrals of the radial power |y|^e over intervals and rectangles:
## - n = 1: closed form, written with expm1/log1p so far-away cells keep full precision
## - n = 2: tensor Gauss-Legendre away from the origin, recursive 4-way subdivision near it,
##   and the polar closed form for squares cornered at the origin
## Shared by the symbolic power weights and by the kernel tables of the bilinear operators.

from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import roots_legendre

NEAR_ORIGIN_WIDTHS = 4.0
SUBDIVISION_TOL = 1e-8
MAX_DEPTH = 14


def _positive_interval(a, b, e):
    # 0 <= a < b
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        if e == -1.0:
            out = np.where(a > 0, np.log1p((b - a) / np.where(a > 0, a, 1.0)), np.inf)
        else:
            k = e + 1.0
            safe_a = np.where(a > 0, a, 1.0)
            away = safe_a ** k * np.expm1(k * np.log1p((b - a) / safe_a)) / k
            at_zero = b ** k / k if k > 0 else np.full_like(b, np.inf)
            out = np.where(a > 0, away, at_zero)
    return out


def interval_integrals(a, b, e):
    """Elementwise integral of |y|^e over [a, b]; +inf where the singularity is not integrable."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    out = np.zeros(a.shape)
    positive = a >= 0
    negative = b <= 0
    straddle = ~(positive | negative)
    if np.any(positive):
        out[positive] = _positive_interval(a[positive], b[positive], e)
    if np.any(negative):
        out[negative] = _positive_interval(-b[negative], -a[negative], e)
    if np.any(straddle):
        left = _positive_interval(np.zeros(np.count_nonzero(straddle)), -a[straddle], e)
        right = _positive_interval(np.zeros(np.count_nonzero(straddle)), b[straddle], e)
        out[straddle] = left + right
    return out


@lru_cache(maxsize=64)
def _sec_power_integral(power):
    value, _ = quad(lambda theta: np.cos(theta) ** (-power), 0.0, np.pi / 4.0, epsabs=0.0, epsrel=1e-13)
    return value


def origin_square_integral(side, e):
    """Integral of |y|^e over [0, side]^2 in polar coordinates."""
    if e <= -2.0:
        return np.inf
    return 2.0 * side ** (e + 2.0) / (e + 2.0) * _sec_power_integral(e + 2.0)


@lru_cache(maxsize=8)
def _gauss(order):
    nodes, weights = roots_legendre(order)
    return nodes, weights


def gauss_box_integrals(x0, x1, y0, y1, e, order=6):
    """Tensor Gauss-Legendre rule for boxes that stay away from the origin (vectorized)."""
    nodes, weights = _gauss(order)
    cx, hx = 0.5 * (x0 + x1), 0.5 * (x1 - x0)
    cy, hy = 0.5 * (y0 + y1), 0.5 * (y1 - y0)
    xs = cx[:, None] + hx[:, None] * nodes[None, :]
    ys = cy[:, None] + hy[:, None] * nodes[None, :]
    radius_sq = xs[:, :, None] ** 2 + ys[:, None, :] ** 2
    values = radius_sq ** (0.5 * e)
    total = np.einsum("kij,i,j->k", values, weights, weights)
    return total * hx * hy


def _box_integral(x0, x1, y0, y1, e, depth=0):
    if x0 < 0 < x1:
        return _box_integral(x0, 0.0, y0, y1, e, depth) + _box_integral(0.0, x1, y0, y1, e, depth)
    if y0 < 0 < y1:
        return _box_integral(x0, x1, y0, 0.0, e, depth) + _box_integral(x0, x1, 0.0, y1, e, depth)
    ax0, ax1 = sorted((abs(x0), abs(x1)))
    ay0, ay1 = sorted((abs(y0), abs(y1)))
    if ax1 == ax0 or ay1 == ay0:
        return 0.0
    if ax0 == 0.0 and ay0 == 0.0:
        m = min(ax1, ay1)
        total = origin_square_integral(m, e)
        if ax1 > m:
            total += _box_integral(m, ax1, 0.0, ay1, e, depth + 1)
        if ay1 > m:
            total += _box_integral(0.0, m, m, ay1, e, depth + 1)
        return total
    box = [np.array([v]) for v in (ax0, ax1, ay0, ay1)]
    coarse = gauss_box_integrals(*box, e, order=4)[0]
    fine = gauss_box_integrals(*box, e, order=8)[0]
    if abs(fine - coarse) <= SUBDIVISION_TOL * abs(fine) or depth >= MAX_DEPTH:
        return fine
    mx, my = 0.5 * (ax0 + ax1), 0.5 * (ay0 + ay1)
    return (
        _box_integral(ax0, mx, ay0, my, e, depth + 1)
        + _box_integral(mx, ax1, ay0, my, e, depth + 1)
        + _box_integral(ax0, mx, my, ay1, e, depth + 1)
        + _box_integral(mx, ax1, my, ay1, e, depth + 1)
    )


def box_integrals(x0, x1, y0, y1, e):
    """Elementwise integral of |y|^e over the rectangles [x0,x1] x [y0,y1]."""
    x0, x1, y0, y1 = (np.asarray(v, dtype=float).ravel() for v in (x0, x1, y0, y1))
    out = np.empty(x0.shape)
    width = np.maximum(x1 - x0, y1 - y0)
    gap_x = np.maximum(0.0, np.maximum(x0, -x1))
    gap_y = np.maximum(0.0, np.maximum(y0, -y1))
    distance = np.hypot(gap_x, gap_y)
    near = distance < NEAR_ORIGIN_WIDTHS * width
    far = ~near
    if np.any(far):
        out[far] = gauss_box_integrals(x0[far], x1[far], y0[far], y1[far], e)
    for k in np.flatnonzero(near):
        out[k] = _box_integral(x0[k], x1[k], y0[k], y1[k], e)
    return out


def cell_power_averages(edges, dimension, e):
    """Exact cell averages of |x|^e on the tensor mesh with the given per-axis edges."""
    h = edges[1] - edges[0]
    if dimension == 1:
        return interval_integrals(edges[:-1], edges[1:], e) / h
    lo, hi = edges[:-1], edges[1:]
    X0, Y0 = np.meshgrid(lo, lo, indexing="ij")
    X1, Y1 = np.meshgrid(hi, hi, indexing="ij")
    return box_integrals(X0, X1, Y0, Y1, e).reshape(X0.shape) / h ** 2
