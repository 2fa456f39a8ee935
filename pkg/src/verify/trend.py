# "src/verify/trend.py"

## Reads a ladder of truncated constants or ratios as "finite" or "infinite":
## - classify_trend: stable when every step moves by at most the drift band, divergent when any
##   value is +inf or every step grows past the band with a total growth of at least `growth`
## - classify_scale_profile: the same rule applied to per-scale maxima read towards small cubes
##   and towards large cubes
## - drift: the largest relative step of a ladder

import logging
import math

import numpy as np

logger = logging.getLogger(__name__)

STABLE = "stable"
DIVERGENT = "divergent"
INDETERMINATE = "indeterminate"

DEFAULT_GROWTH = 1.5
DEFAULT_DRIFT = 0.10
PROFILE_WINDOW = 4


def _clean(values):
    values = np.asarray([float(v) for v in values], dtype=float)
    return np.where(np.isnan(values), np.inf, values)


def drift(values):
    """max_i |v_{i+1} - v_i| / v_i; inf when a step leaves zero or reaches inf."""
    values = _clean(values)
    if len(values) < 2:
        return 0.0
    worst = 0.0
    for before, after in zip(values[:-1], values[1:]):
        if math.isinf(before) or math.isinf(after):
            return math.inf
        if before == 0:
            if after != 0:
                return math.inf
            continue
        worst = max(worst, abs(after - before) / abs(before))
    return worst


def classify_trend(values, growth=DEFAULT_GROWTH, drift_band=DEFAULT_DRIFT):
    values = _clean(values)
    if len(values) < 2:
        raise ValueError("a trend needs at least two values")
    if np.any(np.isinf(values)):
        return DIVERGENT
    if drift(values) <= drift_band:
        return STABLE
    before, after = values[:-1], values[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        steps = np.where(before > 0, after / before, np.where(after > 0, np.inf, 1.0))
    total = values[-1] / values[0] if values[0] > 0 else math.inf
    if np.all(steps > 1.0 + drift_band) and total >= growth:
        return DIVERGENT
    logger.debug("indeterminate trend %s", values.tolist())
    return INDETERMINATE


def classify_scale_profile(per_scale, window=PROFILE_WINDOW, growth=DEFAULT_GROWTH, drift_band=DEFAULT_DRIFT):
    """Trend of per-scale maxima {level: value}, towards fine levels and towards coarse ones.

    Divergent when either direction diverges, stable when both are stable.
    """
    if len(per_scale) < 2:
        raise ValueError("a scale profile needs at least two scales")
    levels = sorted(per_scale)
    fine = [per_scale[j] for j in levels[-window:]]
    coarse = [per_scale[j] for j in reversed(levels[:window])]
    towards_fine = classify_trend(fine, growth, drift_band)
    towards_coarse = classify_trend(coarse, growth, drift_band)
    if DIVERGENT in (towards_fine, towards_coarse):
        verdict = DIVERGENT
    elif towards_fine == towards_coarse == STABLE:
        verdict = STABLE
    else:
        verdict = INDETERMINATE
    return {"fine": towards_fine, "coarse": towards_coarse, "verdict": verdict}


# Example use case
if __name__ == "__main__":
    print(classify_trend([1.0, 1.02, 1.03]), classify_trend([1.0, 1.6, 2.6]), classify_trend([1.0, math.inf]))
