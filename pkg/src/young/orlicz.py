# "src/young/orlicz.py"

## Orlicz averages over a cube for grid functions:
## - Luxemburg norm ||f||_{Phi,Q} = inf{lambda : avg_Q Phi(|f|/lambda) <= 1}, by bisection
## - Krasnosel'skii-Rutickii functional inf_lambda lambda + lambda avg_Q Phi(|f|/lambda),
##   by bounded golden-section/Brent search over log(lambda)
## - The generalized Hölder pair check avg|fg| <= 2 ||f||_{psi} ||g||_{psi-bar}
## - The monotone comparison ratio ||f||_{Phi} / ||f||_{Psi}
## Both functionals work on (values, mass) arrays so the weight and maximal modules can
## reuse them on cube restrictions they already hold.

import logging
import math

import numpy as np
from scipy.optimize import bisect, minimize_scalar

logger = logging.getLogger(__name__)

NORM_RTOL = 1e-12
KR_XATOL = 1e-10


def cube_masses(f, cube):
    """|f| on the cells meeting the cube and each cell's share |cell ∩ Q| / |Q|."""
    volume = cube.volume
    if not volume > 0:
        raise ValueError("Orlicz average over a zero-volume cube")
    values, weights, _ = f.restrict(cube)
    return np.abs(values), weights / volume


def _compress(values, mass):
    keep = (mass > 0) & (values > 0)
    values, mass = values[keep], mass[keep]
    if values.size > 64:
        unique, inverse = np.unique(values, return_inverse=True)
        if unique.size < values.size:
            return unique, np.bincount(inverse, weights=mass)
    return values, mass


def luxemburg(values, mass, phi):
    """inf{lambda > 0 : sum mass * Phi(values / lambda) <= 1}."""
    values, mass = _compress(np.asarray(values, dtype=float), np.asarray(mass, dtype=float))
    if values.size == 0:
        return 0.0
    if np.any(np.isinf(values)):
        return math.inf

    def excess(lam):
        with np.errstate(over="ignore"):
            return float(np.sum(mass * phi(values / lam))) - 1.0

    top = float(values.max())
    hi = top / phi.inverse(1.0)
    if excess(hi) > 0:
        # only possible when the cells overlap more than the cube (never for restrictions)
        while excess(hi) > 0:
            hi *= 2.0
    heaviest = int(np.argmax(values))
    lo = 0.5 * top / phi.inverse(1.0 / mass[heaviest])
    while excess(lo) <= 0:
        lo *= 0.5
    norm = bisect(excess, lo, hi, xtol=hi * 1e-16, rtol=NORM_RTOL, maxiter=400)
    logger.debug("Luxemburg norm %.6g for %s on %d cells", norm, phi, values.size)
    return norm


def kr_functional(values, mass, phi, norm=None):
    """inf over lambda > 0 of lambda + lambda * sum mass * Phi(values / lambda)."""
    values, mass = _compress(np.asarray(values, dtype=float), np.asarray(mass, dtype=float))
    if values.size == 0:
        return 0.0
    if norm is None:
        norm = luxemburg(values, mass, phi)
    if math.isinf(norm):
        return math.inf

    def objective(log_lam):
        lam = math.exp(log_lam)
        with np.errstate(over="ignore"):
            return lam + lam * float(np.sum(mass * phi(values / lam)))

    bounds = (math.log(norm * 1e-8), math.log(2.0 * norm))
    result = minimize_scalar(objective, bounds=bounds, method="bounded", options={"xatol": KR_XATOL})
    # the Luxemburg norm itself gives lambda + lambda * 1 <= 2 ||f||
    return min(float(result.fun), objective(math.log(norm)))


def orlicz_norm(f, cube, phi):
    values, mass = cube_masses(f, cube)
    return luxemburg(values, mass, phi)


def orlicz_norm_prime(f, cube, phi):
    values, mass = cube_masses(f, cube)
    return kr_functional(values, mass, phi)


def holder_pair_check(f, g, cube, psi):
    """(avg_Q |f g|, 2 ||f||_{psi,Q} ||g||_{psi-bar,Q})."""
    lhs = abs(f * g).average(cube)
    rhs = 2.0 * orlicz_norm(f, cube, psi) * orlicz_norm(g, cube, psi.associate())
    return lhs, rhs


def monotone_comparison(f, cube, phi, psi):
    """||f||_{Phi,Q} / ||f||_{Psi,Q}; 0 when f vanishes on Q."""
    weaker = orlicz_norm(f, cube, phi)
    stronger = orlicz_norm(f, cube, psi)
    if stronger == 0:
        return 0.0
    return weaker / stronger


# Example use case
if __name__ == "__main__":
    from ..dyadic.cube import Cube
    from ..signal.grid_function import GridFunction
    from .young_function import YoungFunction

    chi = GridFunction.indicator(Cube((0.0,), 0.5), 1, 2, 6)
    print(orlicz_norm(chi, Cube((0.0,), 1.0), YoungFunction.llogl(1.0)))
