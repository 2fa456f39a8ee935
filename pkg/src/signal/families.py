# "src/signal/families.py"

## Seeded test families feeding the verification harness:
## - indicator, tent, truncated-power, log-weight and random-nonnegative members
## - the necessity test functions v^{-1/(p-r)} restricted to a cube
## - signed helpers used as BMO symbols (clipped log|x|, sign, step)
## - a SHA-256 manifest of the family description so reports can pin their inputs

import hashlib
import json
import logging

import numpy as np

from ..dyadic.cube import Cube
from .grid_function import GridFunction

logger = logging.getLogger(__name__)

FAMILY_KINDS = (
    "indicator", "tent", "truncated-power", "log-weight", "random-nonnegative", "thmG-necessity",
)


def _radius(f):
    coords = f.center_coordinates()
    return np.sqrt(sum(c ** 2 for c in coords))


def _support_mask(f, cube):
    lo, hi = cube.bounds()
    inside = np.ones(f.values.shape, dtype=bool)
    for axis, coords in enumerate(f.center_coordinates()):
        inside &= (coords >= lo[axis]) & (coords < hi[axis])
    return inside


def _default_cubes(dimension):
    return [Cube((0.0,) * dimension, 1.0)]


def make_test_family(kind, params=None, seed=0, dimension=1, half_width_level=2, level=10):
    """Deterministic list of nonnegative, bounded, compactly supported grid functions."""
    params = dict(params or {})
    mesh = (dimension, half_width_level, level)
    blank = GridFunction.zeros(*mesh)
    h = blank.h

    if kind == "indicator":
        cubes = params.get("cubes") or _default_cubes(dimension)
        return [GridFunction.indicator(cube, *mesh) for cube in cubes]

    if kind == "tent":
        members = []
        for center, radius in params.get("tents", [((0.0,) * dimension, 1.0)]):
            offset = np.sqrt(sum((c - x0) ** 2 for c, x0 in zip(blank.center_coordinates(), center)))
            members.append(blank.like(np.clip(1.0 - offset / radius, 0.0, None)))
        return members

    if kind == "truncated-power":
        members = []
        support = params.get("support", 1.0)
        for a in params.get("exponents", [params.get("a", -0.5)]):
            radius = _radius(blank)
            with np.errstate(divide="ignore"):
                values = radius ** a
            if a < 0:
                values = np.minimum(values, h ** a)
            members.append(blank.like(np.where(radius < support, values, 0.0)))
        return members

    if kind == "log-weight":
        support = params.get("support", 1.0)
        radius = np.maximum(_radius(blank), h)
        values = np.abs(np.log(radius))
        return [blank.like(np.where(_radius(blank) < support, values, 0.0))]

    if kind == "random-nonnegative":
        rng = np.random.default_rng(seed)
        count = int(params.get("count", 8))
        block = int(params.get("block_level", max(level - 4, 0)))
        support = params.get("support", Cube((-1.0,) * dimension, 2.0))
        mask = _support_mask(blank, support)
        repeat = 2 ** (level - block) if level >= block else 1
        coarse_shape = tuple(max(s // repeat, 1) for s in blank.values.shape)
        members = []
        for _ in range(count):
            coarse = rng.random(coarse_shape)
            fine = coarse
            for axis in range(dimension):
                fine = np.repeat(fine, repeat, axis=axis)
            members.append(blank.like(np.where(mask, fine, 0.0)))
        return members

    if kind == "thmG-necessity":
        weight = params["weight"]
        exponent = params["p"] - params["r"]
        cube = params["cube"]
        if not exponent > 0:
            raise ValueError("necessity functions need p > r")
        mask = _support_mask(blank, cube)
        if weight.power_exponent is not None:
            # sampled at cell centers, which never sit on the origin
            values = _radius(blank) ** (-weight.power_exponent / exponent)
        else:
            values = weight.power(-1.0 / exponent).values
        return [blank.like(np.where(mask, values, 0.0))]

    raise ValueError(f"unknown test family kind {kind!r}; expected one of {FAMILY_KINDS}")


def clipped_log(dimension=1, half_width_level=2, level=10):
    """log|x| with the origin cells clipped at the cell scale (signed, not compactly supported)."""
    blank = GridFunction.zeros(dimension, half_width_level, level)
    return blank.like(np.log(np.maximum(_radius(blank), 0.5 * blank.h)))


def sign_function(dimension=1, half_width_level=2, level=10):
    blank = GridFunction.zeros(dimension, half_width_level, level)
    return blank.like(np.sign(blank.center_coordinates()[0]))


def step_function(dimension=1, half_width_level=2, level=10):
    blank = GridFunction.zeros(dimension, half_width_level, level)
    return blank.like((blank.center_coordinates()[0] > 0).astype(float))


def family_manifest(kind, params, seed, dimension, half_width_level, level):
    """Stable SHA-256 of a family description."""
    description = {
        "kind": kind,
        "params": {key: repr(value) for key, value in sorted((params or {}).items())},
        "seed": seed,
        "mesh": [dimension, half_width_level, level],
    }
    payload = json.dumps(description, sort_keys=True).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


# Example use case
if __name__ == "__main__":
    family = make_test_family("random-nonnegative", {"count": 3}, seed=7, level=6)
    print([f.total_integral() for f in family])
