# "src/verify/ratios.py"

## The observed sides of the inequalities, estimated as maxima over a family of (f, g) pairs:
## - strong_ratio: ||op(f, g)||_{L^q(u)} / (||f||_{L^p1(v1)} ||g||_{L^p2(v2)})
## - weak_ratio: sup_lambda lambda u({M^{r,s}_alpha(f, g) > lambda})^{1/q} over the same norms
## - weak_necessity_check: the cube-by-cube test functions v_i^{-1/(p_i - r_i)} chi_Q and the
##   comparison of each cube's power-bump condition with twice its weak estimate
## - control_ratio: ∫ |op(f, g)|^q w / ∫ M(f, g)^q w for an A_infinity weight w
## Pairs with a zero denominator are skipped with a warning; a family with nothing left raises.

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from joblib import Parallel, delayed

from ..dyadic.grid import DyadicGrid
from ..errors import AllPairsSkipped, HypothesisViolation, ValidationError
from ..operators.maximal import m_orlicz_alpha
from ..signal.families import make_test_family
from ..weights.bump_conditions import condition_values
from ..weights.cube_scan import CubeScan
from ..weights.muckenhoupt import ainfty_reverse_holder, require_positive
from ..young.young_function import YoungFunction

logger = logging.getLogger(__name__)

NECESSITY_SLACK = 0.05


@dataclass
class RatioEstimate:
    value: float
    per_pair: List[Optional[float]] = field(default_factory=list)
    skipped: List[int] = field(default_factory=list)
    argmax: Optional[int] = None
    details: Dict[str, object] = field(default_factory=dict)

    def __float__(self):
        return float(self.value)

    @property
    def finite(self):
        return math.isfinite(self.value)

    def to_record(self):
        return {
            "ratio": self.value,
            "per_pair": list(self.per_pair),
            "skipped": list(self.skipped),
            "argmax": self.argmax,
            **self.details,
        }


def pair_family(members, pairing="all"):
    """(f, g) pairs from a list of test functions: every ordered pair, or the diagonal."""
    members = list(members)
    if pairing == "all":
        return [(f, g) for f in members for g in members]
    if pairing == "diagonal":
        return [(f, f) for f in members]
    raise ValidationError(f"unknown pairing {pairing!r}; expected 'all' or 'diagonal'")


def _over_family(ratio_of, family, threads, what):
    family = list(family)
    if not family:
        raise ValidationError(f"{what} needs a nonempty family")
    if threads > 1 and len(family) > 1:
        ratios = Parallel(n_jobs=threads, prefer="threads")(delayed(ratio_of)(f, g) for f, g in family)
    else:
        ratios = [ratio_of(f, g) for f, g in family]
    skipped = [index for index, ratio in enumerate(ratios) if ratio is None]
    for index in skipped:
        logger.warning("%s: pair %d has a zero denominator, skipped", what, index)
    if len(skipped) == len(ratios):
        raise AllPairsSkipped(f"{what}: every pair of the family has a zero denominator")
    # NaN reads as +inf so a broken pair can never hide behind the max
    clean = [math.inf if ratio is not None and math.isnan(ratio) else ratio for ratio in ratios]
    argmax = max((i for i, r in enumerate(clean) if r is not None), key=lambda i: clean[i])
    logger.info("%s = %.6g over %d pairs (%d skipped)", what, clean[argmax], len(family), len(skipped))
    return RatioEstimate(float(clean[argmax]), clean, skipped, argmax)


def _input_norms(f, g, cfg, weights):
    denominator = f.lp_norm(cfg.p1, weights.v1) * g.lp_norm(cfg.p2, weights.v2)
    if not (denominator > 0 and math.isfinite(denominator)):
        return None
    return denominator


def strong_ratio(op, cfg, weights, family, threads=1):
    def ratio_of(f, g):
        denominator = _input_norms(f, g, cfg, weights)
        if denominator is None:
            return None
        return op(f, g).lp_norm(cfg.q, weights.u) / denominator

    return _over_family(ratio_of, family, threads, "strong ratio")


def weak_norm(field_values, u, q):
    """sup_lambda lambda u({M > lambda})^{1/q}, the sup taken as lambda rises to each value of M."""
    values = np.asarray(field_values.values, dtype=float).ravel()
    mass = np.asarray(u.values, dtype=float).ravel() * u.cell_volume
    order = np.argsort(-values, kind="stable")
    levels, carried = values[order], np.cumsum(mass[order])
    last = np.append(levels[1:] != levels[:-1], True) & (levels > 0)
    if not np.any(last):
        return 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        candidates = levels[last] * carried[last] ** (1.0 / q)
    candidates = np.where(np.isnan(candidates), np.inf, candidates)
    return float(np.max(candidates))


def _holder_pair(cfg, phi, psi):
    if phi is not None and psi is not None:
        return phi, psi
    if cfg.r is None:
        raise ValidationError("the weak ratio needs a Hölder pair (r, s) or explicit Young functions")
    return phi or YoungFunction.power(cfg.r), psi or YoungFunction.power(cfg.s)


def weak_ratio(cfg, weights, family, phi=None, psi=None, grid=None, scan=None, threads=1):
    phi, psi = _holder_pair(cfg, phi, psi)

    def ratio_of(f, g):
        denominator = _input_norms(f, g, cfg, weights)
        if denominator is None:
            return None
        maximal = m_orlicz_alpha(f, g, phi, psi, cfg.alpha, grid=grid, scan=scan)
        return weak_norm(maximal, weights.u, cfg.q) / denominator

    return _over_family(ratio_of, family, threads, "weak ratio")


def _necessity_levels(mesh):
    top = -mesh.half_width_level
    return list(range(top, max(top, min(mesh.level - 2, 2)) + 1))


def weak_necessity_check(cfg, weights, grid=None, levels=None, slack=NECESSITY_SLACK, threads=1):
    """Per dyadic cube Q: the power-bump condition against twice the weak estimate of the test pair.

    The pair is f = v1^{-1/(p1 - r)} chi_Q, g = v2^{-1/(p2 - s)} chi_Q, and lambda is
    half of |Q|^{alpha/n} (avg_Q f^r)^{1/r} (avg_Q g^s)^{1/s}.
    """
    cfg.require("thmG-necessity")
    r, s = cfg.r, cfg.s
    if not cfg.p1 > r:
        raise HypothesisViolation("thmG-necessity", "p1 > r for the test functions")
    if not cfg.p2 > s:
        raise HypothesisViolation("thmG-necessity", "p2 > s for the test functions")
    mesh = weights.u
    grid = grid or DyadicGrid.standard(mesh.dimension)
    W = mesh.half_width
    cubes = []
    for level in levels if levels is not None else _necessity_levels(mesh):
        cubes.extend(grid.cubes_meeting(level, (-W,) * mesh.dimension, (W,) * mesh.dimension))
    cubes = [cube for cube in cubes if all(-W <= c and c + cube.side <= W for c in cube.corner)]
    if not cubes:
        raise ValidationError("no dyadic cube of the requested levels fits in the box")

    scan = CubeScan.from_arrays(
        mesh,
        np.array([cube.corner for cube in cubes]),
        np.array([cube.side for cube in cubes]),
        np.array([cube.address.level for cube in cubes]),
    )
    conditions = condition_values("eq21", weights, cfg, scan)
    phi, psi = YoungFunction.power(r), YoungFunction.power(s)
    mesh_args = (mesh.dimension, mesh.half_width_level, mesh.level)

    def one_cube(index):
        cube = cubes[index]
        f = make_test_family("thmG-necessity", {"weight": weights.v1, "p": cfg.p1, "r": r, "cube": cube}, 0, *mesh_args)[0]
        g = make_test_family("thmG-necessity", {"weight": weights.v2, "p": cfg.p2, "r": s, "cube": cube}, 0, *mesh_args)[0]
        denominator = _input_norms(f, g, cfg, weights)
        if denominator is None:
            return None
        lam = 0.5 * cube.volume ** (cfg.alpha / cfg.n)
        lam *= f.power(r).average(cube) ** (1.0 / r) * g.power(s).average(cube) ** (1.0 / s)
        display = 2.0 * lam * mesh.integral(cube) ** (1.0 / cfg.q) / denominator
        maximal = m_orlicz_alpha(f, g, phi, psi, cfg.alpha, grid=grid)
        estimate = weak_norm(maximal, weights.u, cfg.q) / denominator
        condition = float(conditions[index])
        return {
            "cube": cube.to_dict(),
            "condition": condition,
            "test_display": display,
            "weak_estimate": estimate,
            "holds": bool(condition * (1.0 - slack) <= 2.0 * estimate),
            "holds_exact": bool(display <= 2.0 * estimate * (1.0 + 1e-9)),
        }

    indices = range(len(cubes))
    if threads > 1:
        rows = Parallel(n_jobs=threads, prefer="threads")(delayed(one_cube)(i) for i in indices)
    else:
        rows = [one_cube(i) for i in indices]
    rows = [row for row in rows if row is not None]
    if not rows:
        raise AllPairsSkipped("every necessity test pair has a zero denominator")
    failures = [row for row in rows if not row["holds"]]
    logger.info("necessity check on %d cubes: %d violations", len(rows), len(failures))
    return {
        "cubes": rows,
        "violations": len(failures),
        "holds": not failures,
        "max_condition": max(row["condition"] for row in rows),
        "max_estimate": max(row["weak_estimate"] for row in rows),
        "slack": slack,
    }


def weighted_power_integral(f, q, w):
    """∫ |f|^q w over the box, cell by cell."""
    with np.errstate(invalid="ignore", over="ignore"):
        terms = np.abs(f.values) ** q * w.values
    return float(np.sum(np.nan_to_num(terms, nan=0.0, posinf=np.inf)) * f.cell_volume)


def control_ratio(numerator, denominator, q, w, family, scan=None, threads=1):
    """max over the family of ∫ |numerator(f, g)|^q w / ∫ denominator(f, g)^q w."""
    if not q > 0:
        raise ValidationError(f"q must be positive, got {q}")
    require_positive(w, "w")
    scan = scan if scan is not None else CubeScan.for_function(w)
    m, constant = ainfty_reverse_holder(w, scan)

    def ratio_of(f, g):
        bottom = weighted_power_integral(denominator(f, g), q, w)
        if not (bottom > 0 and math.isfinite(bottom)):
            return None
        return weighted_power_integral(numerator(f, g), q, w) / bottom

    estimate = _over_family(ratio_of, family, threads, "control ratio")
    estimate.details["reverse_holder"] = {"exponent": m, "constant": constant}
    return estimate
