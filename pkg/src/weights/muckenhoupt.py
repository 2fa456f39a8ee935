# "src/weights/muckenhoupt.py"

## Muckenhoupt-type constants of single weights and weight pairs over a `CubeScan`:
## - A_p: sup (avg w)(avg w^{1-p'})^{p-1}, and for p = 1 the ratio Mw / w with the
##   scan-restricted maximal function
## - A_infinity through the reverse Hölder search over m in {2, 1.5, 1.25, 1.1, 1.05}
## - The (eta, kappa) doubling table: worst share w(S)/w(Q) over subsets |S| <= eta|Q|
## - The bilinear A_{P,q} constant and the A_{2q}, A_{2p_i'} constants it implies

import logging

import numpy as np
import pandas as pd

from ..dyadic.cube import Cube
from ..errors import NoReverseHolder, ValidationError
from ..signal.exponents import conjugate
from .cube_scan import ConditionConstant

logger = logging.getLogger(__name__)

REVERSE_HOLDER_EXPONENTS = (2.0, 1.5, 1.25, 1.1, 1.05)
REVERSE_HOLDER_BOUND = 10.0
DEFAULT_ETAS = (0.1, 0.25, 0.5, 0.75, 0.9)


def require_positive(w, name="weight"):
    if not w.is_positive():
        raise ValidationError(f"{name} must be strictly positive on the domain box")


def ap_constant(w, p, scan):
    require_positive(w)
    if p < 1:
        raise ValidationError(f"A_p needs p >= 1, got {p}")
    if p == 1:
        return a1_constant(w, scan)
    dual = w.power(1.0 - conjugate(p))
    with np.errstate(invalid="ignore", over="ignore"):
        values = scan.averages(w) * scan.averages(dual) ** (p - 1.0)
    constant = scan.reduce(values)
    logger.debug("A_%g constant %.6g over %d cubes", p, constant.value, len(scan))
    return constant


def a1_constant(w, scan):
    """max over cells of Mw / w, M restricted to the scan cubes containing the cell."""
    maximal = scan.pointwise_max(scan.averages(w), w)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = maximal / w.values
    ratio = np.where(np.isnan(ratio), np.inf, ratio)
    cell = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    corner = tuple(float(w.edges[i]) for i in cell)
    return ConditionConstant(float(ratio[cell]), {}, Cube(corner, w.h), len(scan))


def reverse_holder_constant(w, m, scan):
    with np.errstate(invalid="ignore", over="ignore"):
        values = scan.averages(w.power(m)) ** (1.0 / m) / scan.averages(w)
    return scan.reduce(values)


def ainfty_reverse_holder(w, scan, exponents=REVERSE_HOLDER_EXPONENTS, bound=REVERSE_HOLDER_BOUND):
    """(m, C) for the largest m with (avg w^m)^{1/m} <= C avg w on every scan cube, C <= bound."""
    require_positive(w)
    for m in sorted(exponents, reverse=True):
        constant = reverse_holder_constant(w, m, scan).value
        logger.debug("reverse Hölder m=%g: C=%.6g", m, constant)
        if constant <= bound:
            return m, constant
    raise NoReverseHolder(
        f"no reverse Hölder exponent in {sorted(exponents)} with constant <= {bound:g} on this scan"
    )


def _heaviest_shares(w, cube, etas):
    values, overlap, _ = w.restrict(cube)
    mass = values * overlap
    total = float(np.sum(mass))
    if not np.isfinite(total) or total <= 0:
        return np.full(len(etas), np.nan)
    order = np.argsort(values)[::-1]
    volume = np.cumsum(overlap[order])
    carried = np.cumsum(mass[order])
    shares = []
    for eta in etas:
        budget = eta * cube.volume
        k = int(np.searchsorted(volume, budget))
        if k >= len(order):
            shares.append(1.0)
            continue
        before_volume = volume[k - 1] if k else 0.0
        before_mass = carried[k - 1] if k else 0.0
        shares.append((before_mass + (budget - before_volume) * values[order[k]]) / total)
    return np.array(shares)


def doubling_table(w, scan, etas=DEFAULT_ETAS):
    """Measured kappa(eta) = max over scan cubes of the heaviest eta-share of w(Q)."""
    require_positive(w)
    shares = scan.map_cubes(lambda cube: _heaviest_shares(w, cube, etas))
    kappa = np.nanmax(np.atleast_2d(shares), axis=0)
    return pd.DataFrame({"eta": list(etas), "kappa": kappa})


def apq_constant(w1, w2, cfg, scan):
    """sup (avg (w1 w2)^q)^{1/q} (avg w1^{-p1'})^{1/p1'} (avg w2^{-p2'})^{1/p2'}."""
    require_positive(w1, "w1")
    require_positive(w2, "w2")
    if not (cfg.p1 > 1 and cfg.p2 > 1):
        raise ValidationError("A_{P,q} needs p1, p2 > 1")
    p1p, p2p, q = cfg.p1_prime, cfg.p2_prime, cfg.q
    with np.errstate(invalid="ignore", over="ignore"):
        values = (
            scan.averages((w1 * w2).power(q)) ** (1.0 / q)
            * scan.averages(w1.power(-p1p)) ** (1.0 / p1p)
            * scan.averages(w2.power(-p2p)) ** (1.0 / p2p)
        )
    return scan.reduce(values)


def apq_consequences(w1, w2, cfg, scan):
    """A_{2q} constant of (w1 w2)^q and A_{2p_i'} constants of w_i^{-p_i'}."""
    p1p, p2p, q = cfg.p1_prime, cfg.p2_prime, cfg.q
    return {
        "product": ap_constant((w1 * w2).power(q), 2.0 * q, scan),
        "w1": ap_constant(w1.power(-p1p), 2.0 * p1p, scan),
        "w2": ap_constant(w2.power(-p2p), 2.0 * p2p, scan),
    }


# Example use case
if __name__ == "__main__":
    from ..signal.grid_function import GridFunction
    from .cube_scan import CubeScan

    w = GridFunction.power_weight(0.5, 1, 1, 6)
    scan = CubeScan.for_function(w)
    print(float(ap_constant(w, 2.0, scan)), ainfty_reverse_holder(w, scan))
    print(doubling_table(w, scan))
