# "src/verify/steinweiss.py"

## Power-weight checks of the weighted bilinear Stein-Weiss inequality and of the one-weight
## example that escapes the A_p x A_p range:
## - steinweiss_check: flags the exponent window, balance and sign conditions, evaluates the
##   power-bump condition with u = |x|^{-beta q}, v_i = |x|^{p_i gamma_i} over a refinement ladder
##   and its per-scale profile, and measures the trilinear form on indicator triples
## - section10_example: the one-weight constant K for w1 = |x|^a, w2 = |x|^b across box widths,
##   next to the A_p constants of w1 and w2 taken separately

import itertools
import logging

from ..dyadic.cube import Cube
from ..errors import ValidationError
from ..operators.bilinear import trilinear_form
from ..signal.exponents import ExponentConfig, conjugate
from ..signal.grid_function import GridFunction
from ..weights.bump_conditions import WeightTriple, bump_constant
from ..weights.cube_scan import CubeScan
from ..weights.muckenhoupt import ap_constant
from .report import FAIL, INCONCLUSIVE, NOT_APPLICABLE, PASS, TheoremReport
from .trend import DIVERGENT, STABLE, classify_scale_profile, classify_trend

logger = logging.getLogger(__name__)

BALANCE_TOLERANCE = 1e-9
SECTION10_WIDTHS = (1, 2, 3, 4)
TRILINEAR_CUBES = (Cube((0.0,), 1.0), Cube((-0.5,), 1.0))


def steinweiss_conditions(alpha, beta, gamma1, gamma2, p1, p2, q, n=1):
    p = 1.0 / (1.0 / p1 + 1.0 / p2)
    target = n + n / q - n / p
    total = alpha + beta + gamma1 + gamma2
    return {
        "p_window": 1.0 < p <= q,
        "beta_window": beta < n / q,
        "gamma1_window": gamma1 < (p - 1.0) * n / p1,
        "gamma2_window": gamma2 < (p - 1.0) * n / p2,
        "balance": abs(total - target) <= BALANCE_TOLERANCE,
        "nonnegative_sum": beta + gamma1 + gamma2 >= 0,
        "homogeneity_exponent": target - total,
    }


def _indicator_members(mesh_args, cubes):
    dimension = mesh_args[0]
    members = []
    for cube in cubes:
        if cube.dimension != dimension:
            cube = Cube(cube.corner * dimension, cube.side)
        members.append(GridFunction.indicator(cube, *mesh_args))
    return members


def trilinear_ratio(alpha_op, beta, gamma1, gamma2, p1, p2, q, mesh_args, cubes=TRILINEAR_CUBES, threads=1):
    """max over indicator triples of T(f, g, h) / (||f||_p1 ||g||_p2 ||h||_q')."""
    members = _indicator_members(mesh_args, cubes)
    q_prime = conjugate(q)
    best = 0.0
    for f, g, h in itertools.product(members, repeat=3):
        value = trilinear_form(f, g, h, alpha_op, beta, gamma1, gamma2, threads)
        best = max(best, value / (f.lp_norm(p1) * g.lp_norm(p2) * h.lp_norm(q_prime)))
    return best


def steinweiss_check(alpha, beta, gamma1, gamma2, p1, p2, q, n=1, half_width_level=1, levels=(6, 7), threads=1):
    """Stein-Weiss report; violated exponent conditions are flagged, never raised."""
    if not (p1 > 1 and p2 > 1 and q > 0):
        raise ValidationError("the Stein-Weiss check needs p1, p2 > 1 and q > 0")
    if not 0 < alpha < n:
        raise ValidationError(f"the Stein-Weiss kernel |y|^-alpha needs 0 < alpha < n, got {alpha}")
    flags = steinweiss_conditions(alpha, beta, gamma1, gamma2, p1, p2, q, n)
    cfg = ExponentConfig(n=n, alpha=n - alpha, p1=p1, p2=p2, q=q)
    report = TheoremReport("steinweiss", cfg, scales=list(levels))
    report.provenance = {
        "weights": {"u": f"power({-beta * q:g})", "v1": f"power({p1 * gamma1:g})", "v2": f"power({p2 * gamma2:g})"},
        "tuple": {"alpha": alpha, "beta": beta, "gamma1": gamma1, "gamma2": gamma2},
    }
    report.sections["conditions"] = flags
    admissible = all(value for key, value in flags.items() if key != "homogeneity_exponent")
    if not flags["p_window"]:
        report.status = NOT_APPLICABLE
        report.note("1 < p <= q fails; no condition constant is evaluated")
        return report

    profile = None
    for level in levels:
        mesh_args = (n, half_width_level, level)
        weights = WeightTriple.stein_weiss(beta, gamma1, gamma2, cfg, *mesh_args)
        constant = bump_constant("steinweiss", weights, cfg, CubeScan.for_function(weights.u))
        report.constants.append(constant.value)
        report.ratios.append(trilinear_ratio(n - alpha, beta, gamma1, gamma2, p1, p2, q, mesh_args, threads=threads))
        # mesh-level cubes miss the centered positions, so they are left out of the profile
        coarse = {j: v for j, v in constant.per_scale.items() if j < level}
        if len(coarse) >= 2:
            profile = classify_scale_profile(coarse)

    report.condition_trend = classify_trend(report.constants)
    report.ratio_trend = classify_trend(report.ratios)
    report.sections["scale_profile"] = profile
    flagged_divergent = report.condition_trend == DIVERGENT or (profile and profile["verdict"] == DIVERGENT)
    if admissible:
        stable = report.condition_trend == STABLE and not flagged_divergent
        report.status = PASS if stable else (FAIL if flagged_divergent else INCONCLUSIVE)
    else:
        report.status = PASS if flagged_divergent else INCONCLUSIVE
    logger.info(report.summary())
    return report


def section10_conditions(a, b, p1, p2, n=1):
    p = 1.0 / (1.0 / p1 + 1.0 / p2)
    return {
        "w1_window": a < n * (p - 1.0),
        "w2_window": b < n * (p - 1.0),
        "balance": -n < p * a / p1 + p * b / p2,
        "ap_ap_range": -n < a and -n < b,
    }


def section10_example(a, b, p1, p2, n=1, level=4, half_width_levels=SECTION10_WIDTHS):
    """K for w1 = |x|^a, w2 = |x|^b across box widths 2^L0, with A_p of w1 and w2 alongside."""
    cfg = ExponentConfig(n=n, alpha=0.0, p1=p1, p2=p2)
    p = cfg.p
    report = TheoremReport("section10-example", cfg, scales=[2 ** L0 for L0 in half_width_levels], scale_kind="width")
    report.provenance = {"weights": {"w1": f"power({a:g})", "w2": f"power({b:g})"}}
    flags = section10_conditions(a, b, p1, p2, n)
    report.sections["conditions"] = flags

    ap_w1, ap_w2 = [], []
    for L0 in half_width_levels:
        w1 = GridFunction.power_weight(a, n, L0, level)
        w2 = GridFunction.power_weight(b, n, L0, level)
        weights = WeightTriple.one_weight(w1, w2, p, p1, p2)
        scan = CubeScan.for_function(w1)
        report.constants.append(bump_constant("onevec", weights, cfg, scan).value)
        ap_w1.append(ap_constant(w1, p, scan).value)
        ap_w2.append(ap_constant(w2, p, scan).value)

    report.condition_trend = classify_trend(report.constants)
    ap_trends = {"w1": classify_trend(ap_w1), "w2": classify_trend(ap_w2)}
    report.sections["ap"] = {"p": p, "w1": ap_w1, "w2": ap_w2, "trends": ap_trends}
    k_stable = report.condition_trend == STABLE
    report.sections["headline"] = {
        "k_stable": k_stable,
        "ap_divergent": DIVERGENT in ap_trends.values(),
        "separated": k_stable and DIVERGENT in ap_trends.values(),
    }
    conditions_hold = all(flags[key] for key in ("w1_window", "w2_window", "balance"))
    if conditions_hold:
        report.status = PASS if k_stable else (FAIL if report.condition_trend == DIVERGENT else INCONCLUSIVE)
    else:
        report.status = PASS if report.condition_trend == DIVERGENT else INCONCLUSIVE
    logger.info(report.summary())
    return report


# Example use case
if __name__ == "__main__":
    print(steinweiss_check(0.7, 0.1, 0.1, 0.1, 4.0, 4.0, 2.0).summary())
    print(section10_example(-1.5, 0.5, 4.0, 4.0).sections["headline"])
