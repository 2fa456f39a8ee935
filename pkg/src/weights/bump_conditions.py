# "src/weights/bump_conditions.py"

## Implements the `WeightTriple` (u, v1, v2) and `bump_constant`, the two-weight conditions
## of every theorem evaluated as a max over a `CubeScan`:
## - thmD / thmA: |Q|^e (avg u^{1/(1-q)})^{(1-q)/q} ||v1^{-1/p1}||_{phi1} ||v2^{-1/p2}||_{phi2}
##   (thmA bumps the u factor with psi = L log L^{qN/(1-q)}; q = 1 reads sup_Q u)
## - thmE / eq22 / thmB / BMtw: |Q|^e ||u^{1/q}||_psi ||v1^{-r/p1}||_{phi1}^{1/r} ||v2^{-s/p2}||_{phi2}^{1/s}
## - eq21 power bump: |Q|^e (avg u)^{1/q} (avg v1^{-r/(p1-r)})^{(p1-r)/(r p1)} (...)
##   with (inf_Q v1)^{-1/p1} when p1 = r
## - onevec / eq91: the one-weight form with u = w1^{q/p1} w2^{q/p2}
## - steinweiss / eq105: eq21 for the power weights of the weighted Stein-Weiss inequality
## where e = alpha/n + 1/q - 1/p

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from ..signal.exponents import TOLERANCE
from ..signal.grid_function import GridFunction
from ..young.bumps import BumpSelection, theorem_bumps, thm_e_bumps
from ..young.orlicz import orlicz_norm
from .muckenhoupt import require_positive

logger = logging.getLogger(__name__)

BUMP_KINDS = (
    "thmD", "thmE", "eq22", "thmA", "thmB", "eq21", "onevec", "eq91", "BMtw", "steinweiss", "eq105",
)

# exponent hypotheses checked before evaluating each kind
_HYPOTHESES = {
    "thmD": "thmD",
    "thmA": "thmA",
    "thmE": "thmE",
    "eq22": "thmH",
    "thmB": "thmB",
    "eq21": "thmG-weak",
    "onevec": "BM-onevec",
    "eq91": "thmI",
    "BMtw": "BMtw",
    "steinweiss": "steinweiss",
    "eq105": "steinweiss",
}


@dataclass
class WeightTriple:
    u: GridFunction
    v1: GridFunction
    v2: GridFunction

    def __post_init__(self):
        if not (self.u.same_mesh(self.v1) and self.u.same_mesh(self.v2)):
            raise ValidationError("u, v1 and v2 must live on the same mesh")
        for name in ("u", "v1", "v2"):
            require_positive(getattr(self, name), name)

    @classmethod
    def power(cls, a_u, a_v1, a_v2, dimension=1, half_width_level=2, level=10):
        make = lambda a: GridFunction.power_weight(a, dimension, half_width_level, level)
        return cls(make(a_u), make(a_v1), make(a_v2))

    @classmethod
    def one_weight(cls, w1, w2, q, p1, p2):
        """(w1^{q/p1} w2^{q/p2}, w1, w2)."""
        return cls(w1.power(q / p1) * w2.power(q / p2), w1, w2)

    @classmethod
    def stein_weiss(cls, beta, gamma1, gamma2, cfg, dimension=1, half_width_level=2, level=10):
        """u = |x|^{-beta q}, v_i = |x|^{p_i gamma_i}."""
        return cls.power(-beta * cfg.q, cfg.p1 * gamma1, cfg.p2 * gamma2, dimension, half_width_level, level)

    @property
    def tags(self):
        return {name: getattr(self, name).power_exponent for name in ("u", "v1", "v2")}

    def to_dict(self):
        return {name: (f"power({a:g})" if a is not None else "grid") for name, a in self.tags.items()}


# -- per-scan factors -------------------------------------------------------------------------


def _average_factor(f, exponent, scan):
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return scan.averages(f) ** exponent


def _orlicz_factor(f, phi, scan, exponent=1.0):
    norms = scan.map_cubes(lambda cube: orlicz_norm(f, cube, phi))
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return norms ** exponent


def _power_bump_factor(v, p_i, r_i, scan):
    """(avg v^{-r/(p-r)})^{(p-r)/(r p)}, or (inf_Q v)^{-1/p} when p = r."""
    if p_i - r_i <= TOLERANCE:
        with np.errstate(divide="ignore"):
            return scan.map_cubes(v.min_on) ** (-1.0 / p_i)
    return _average_factor(v.power(-r_i / (p_i - r_i)), (p_i - r_i) / (r_i * p_i), scan)


def _u_factor(u, q, scan, psi=None):
    """(avg u^{1/(1-q)})^{(1-q)/q} or its psi-bumped form; sup_Q u at q = 1."""
    if q >= 1.0 - TOLERANCE:
        return scan.map_cubes(u.max_on)
    lifted = u.power(1.0 / (1.0 - q))
    if psi is None:
        return _average_factor(lifted, (1.0 - q) / q, scan)
    return _orlicz_factor(lifted, psi, scan, (1.0 - q) / q)


def _prefactor(cfg, scan):
    return scan.volumes() ** cfg.prefactor_exponent


# -- the displays -----------------------------------------------------------------------------


def _fractional_bump_values(weights, cfg, bumps, scan, psi_u=False):
    u_factor = _u_factor(weights.u, cfg.q, scan, bumps.psi if psi_u else None)
    return (
        _prefactor(cfg, scan)
        * u_factor
        * _orlicz_factor(weights.v1.power(-1.0 / cfg.p1), bumps.phi1, scan)
        * _orlicz_factor(weights.v2.power(-1.0 / cfg.p2), bumps.phi2, scan)
    )


def _holder_bump_values(weights, cfg, bumps, scan, u_exponent, prefactor=True):
    if bumps.psi is None:
        raise ValidationError("this condition needs a psi bump for the u factor")
    r, s = cfg.r, cfg.s
    values = (
        _orlicz_factor(weights.u.power(u_exponent), bumps.psi, scan)
        * _orlicz_factor(weights.v1.power(-r / cfg.p1), bumps.phi1, scan, 1.0 / r)
        * _orlicz_factor(weights.v2.power(-s / cfg.p2), bumps.phi2, scan, 1.0 / s)
    )
    return _prefactor(cfg, scan) * values if prefactor else values


def _power_bump_values(weights, cfg, scan):
    return (
        _prefactor(cfg, scan)
        * _average_factor(weights.u, 1.0 / cfg.q, scan)
        * _power_bump_factor(weights.v1, cfg.p1, cfg.r, scan)
        * _power_bump_factor(weights.v2, cfg.p2, cfg.s, scan)
    )


def _one_weight_values(weights, cfg, scan):
    w1, w2 = weights.v1, weights.v2
    u = w1.power(cfg.q / cfg.p1) * w2.power(cfg.q / cfg.p2)
    return (
        _average_factor(u, 1.0 / cfg.q, scan)
        * _power_bump_factor(w1, cfg.p1, cfg.r, scan)
        * _power_bump_factor(w2, cfg.p2, cfg.s, scan)
    )


def _default_bumps(kind, cfg):
    if kind == "eq22":
        return thm_e_bumps(cfg)
    return theorem_bumps(kind, cfg)


def condition_values(kind, weights, cfg, scan, bumps=None):
    """The displayed condition of `kind` on every scan cube."""
    if kind not in BUMP_KINDS:
        raise ValidationError(f"unknown bump condition {kind!r}; expected one of {', '.join(BUMP_KINDS)}")
    if kind in ("onevec", "steinweiss", "eq105"):
        cfg = cfg.with_natural_pair()
    if kind == "onevec":
        cfg = cfg.replace(q=cfg.p, sobolev=False)
    cfg.require(_HYPOTHESES[kind])

    if kind in ("thmD", "thmA", "thmE", "eq22", "thmB", "BMtw"):
        bumps = bumps if bumps is not None else _default_bumps(kind, cfg)
        if not isinstance(bumps, BumpSelection):
            raise ValidationError("bumps must be a BumpSelection")

    if kind == "thmD":
        values = _fractional_bump_values(weights, cfg, bumps, scan)
    elif kind == "thmA":
        values = _fractional_bump_values(weights, cfg, bumps, scan, psi_u=True)
    elif kind in ("thmE", "eq22", "thmB"):
        values = _holder_bump_values(weights, cfg, bumps, scan, 1.0 / cfg.q)
    elif kind == "BMtw":
        values = _holder_bump_values(weights, cfg, bumps, scan, 1.0 / cfg.p, prefactor=False)
    elif kind in ("onevec", "eq91"):
        values = _one_weight_values(weights, cfg, scan)
    else:
        values = _power_bump_values(weights, cfg, scan)
    return values


def bump_constant(kind, weights, cfg, scan, bumps=None):
    """Max over the scan of the displayed condition of `kind`, as a ConditionConstant."""
    constant = scan.reduce(condition_values(kind, weights, cfg, scan, bumps))
    logger.info("%s condition constant %.6g over %d cubes", kind, constant.value, len(scan))
    return constant


# Example use case
if __name__ == "__main__":
    from ..signal.exponents import ExponentConfig
    from .cube_scan import CubeScan

    cfg = ExponentConfig(p1=4.0, p2=4.0)
    weights = WeightTriple.one_weight(
        GridFunction.power_weight(-0.5, 1, 1, 6), GridFunction.power_weight(0.5, 1, 1, 6), cfg.p, cfg.p1, cfg.p2
    )
    print(float(bump_constant("onevec", weights, cfg, CubeScan.for_function(weights.u))))
