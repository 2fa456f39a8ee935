# "src/sparse/sums.py"

## Sums over a `SparseFamily`:
## - `SparseTerms`: which |Q|-power and which Orlicz factors ||f_i||_{Phi_i,Q}^{e_i} each cube carries
##   (the q < 1 fractional triple, the Hölder-pair triple with the h u^{1/q} factor, or any product)
## - sparse_sum: Σ_{k,j} |Q_j^k|^{v} Π_i ||f_i||^{e_i}_{Phi_i,Q_j^k}
## - sparse_sum_by_disjoint_sets: the same terms weighted by |E_j^k| / |Q_j^k|
## - subtree_weight_sum / geometric_collapse: Σ over the dyadic tree below one cube of the
##   |Q|^{alpha q/n + 1} weights, against the closed form 2^{alpha q} / (2^{alpha q} - 1)

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..errors import ValidationError
from ..operators.maximal import cube_norms
from ..weights.cube_scan import CubeScan
from ..young.bumps import thm_a_bumps, thm_c_pair
from ..young.young_function import YoungFunction

logger = logging.getLogger(__name__)

SUBTREE_RTOL = 1e-17
MAX_SUBTREE_DEPTH = 4000


@dataclass
class SparseTerms:
    volume_exponent: float
    factors: List[Tuple[object, Optional[YoungFunction], float]] = field(default_factory=list)

    def __post_init__(self):
        if not self.factors:
            raise ValidationError("a sparse sum needs at least one Orlicz factor")
        first = self.factors[0][0]
        for function, phi, exponent in self.factors:
            if not function.same_mesh(first):
                raise ValidationError("sparse-sum factors must live on the same mesh")
            if phi is not None and not isinstance(phi, YoungFunction):
                raise ValidationError(f"factor Young function must be a YoungFunction, got {phi!r}")
            if not exponent > 0:
                raise ValidationError(f"factor exponents must be positive, got {exponent}")

    @classmethod
    def generic(cls, volume_exponent, factors):
        return cls(float(volume_exponent), list(factors))

    @classmethod
    def thm_a(cls, f, g, u, cfg):
        """|Q|^{alpha q/n + 1} (||f||_{L(log L)^m} ||g||_{L(log L)^{N-m}})^q ||u^{1/(1-q)}||^{1-q}."""
        q = cfg.q
        if not q < 1:
            raise ValidationError(f"this sparse form needs q < 1, got q = {q:g}")
        llogl = lambda k: YoungFunction.llogl(k) if k > 0 else None
        return cls(
            cfg.alpha * q / cfg.n + 1.0,
            [
                (f, llogl(cfg.m), q),
                (g, llogl(cfg.N - cfg.m), q),
                (u.power(1.0 / (1.0 - q)), thm_a_bumps(cfg).psi, 1.0 - q),
            ],
        )

    @classmethod
    def thm_b(cls, f, g, h, u, cfg):
        """|Q|^{alpha/n + 1} ||f||_{Phi} ||g||_{Psi} ||h u^{1/q}||_{L(log L)^N} with the Hölder-pair Phi, Psi."""
        if cfg.r is None:
            raise ValidationError("this sparse form needs a Hölder pair (r, s)")
        phi, psi = thm_c_pair(cfg)
        return cls(
            cfg.alpha / cfg.n + 1.0,
            [(f, phi, 1.0), (g, psi, 1.0), (h * u.power(1.0 / cfg.q), YoungFunction.llogl(cfg.N) if cfg.N else None, 1.0)],
        )


def _terms(family, terms):
    if family.empty:
        return np.zeros(0), np.zeros(0)
    cubes = list(family)
    first = terms.factors[0][0]
    if not first.same_mesh(family.mesh):
        raise ValidationError("sparse-sum factors and the family live on different meshes")
    corners = np.array([c.cube.corner for c in cubes])
    sides = np.array([c.cube.side for c in cubes])
    scan = CubeScan.from_arrays(first, corners, sides, np.array([c.k for c in cubes]))
    values = scan.volumes() ** terms.volume_exponent
    for function, phi, exponent in terms.factors:
        values = values * cube_norms(function, phi, scan) ** exponent
    ratios = np.array([c.carved_ratio for c in cubes])
    return values, ratios


def sparse_sum(family, cfg, terms):
    """Σ over the selected cubes of the term product; 0 for an empty family."""
    values, _ = _terms(family, terms)
    total = float(np.sum(values))
    logger.info("sparse sum %.6g over %d cubes (alpha=%g, q=%g)", total, len(values), cfg.alpha, cfg.q)
    return total


def sparse_sum_by_disjoint_sets(family, cfg, terms):
    values, ratios = _terms(family, terms)
    return float(np.sum(values * ratios))


def geometric_collapse(alpha, q):
    """Σ_{r >= 0} 2^{-alpha q r} in closed form."""
    if not alpha * q > 0:
        raise ValidationError("the geometric collapse needs alpha q > 0")
    ratio = 2.0 ** (alpha * q)
    return ratio / (ratio - 1.0)


def subtree_weight_sum(alpha, q, dimension=1, side=1.0, grid=None):
    """Σ over the dyadic tree below a top cube of |Q|^{alpha q/n + 1}, normalized by |top|^{alpha q/n + 1}.

    The first levels are enumerated through the grid's children to pin the branching number;
    deeper levels are summed by count.
    """
    if not alpha * q > 0:
        raise ValidationError("the subtree sum needs alpha q > 0")
    exponent = alpha * q / dimension + 1.0
    top_volume = side ** dimension
    branching = 2 ** dimension
    if grid is not None:
        top = grid.cube_at(-int(round(math.log2(side))), (0.0,) * dimension)
        branching = len(grid.children(top))
    count, volume = 1.0, 1.0
    total = 0.0
    for depth in range(MAX_SUBTREE_DEPTH):
        term = count * volume ** exponent
        total += term
        if term < SUBTREE_RTOL * total:
            break
        count *= branching
        volume /= branching
    else:
        logger.warning("subtree sum stopped at depth %d before converging", MAX_SUBTREE_DEPTH)
    logger.debug("subtree sum %.15g over %d levels (|top| = %g)", total, depth + 1, top_volume)
    return total


# Example use case
if __name__ == "__main__":
    print(subtree_weight_sum(0.5, 1.0), geometric_collapse(0.5, 1.0))
