# "src/dyadic/cube.py"

## Axis-aligned half-open cubes [corner, corner + side)^n:
## - Free-floating cubes (any float corner and side)
## - Addressed cubes belonging to a shifted dyadic grid, carrying (shift, level, coords)
## - Exact containment and intersection tests done in rational arithmetic
## - The concentric triple 3Q

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np


def dyadic_side(level):
    return Fraction(2) ** (-level)


@dataclass(frozen=True)
class CubeAddress:
    shift: Tuple[Fraction, ...]
    level: int
    coords: Tuple[int, ...]

    def exact_corner(self):
        side = dyadic_side(self.level)
        sign = 1 if self.level % 2 == 0 else -1
        return tuple((m + sign * t) * side for m, t in zip(self.coords, self.shift))

    def to_dict(self):
        return {
            "shift": [str(t) for t in self.shift],
            "level": self.level,
            "coords": list(self.coords),
        }


@dataclass(frozen=True)
class Cube:
    corner: Tuple[float, ...]
    side: float
    address: Optional[CubeAddress] = None

    def __post_init__(self):
        if not self.side > 0:
            raise ValueError(f"cube side must be positive, got {self.side}")
        object.__setattr__(self, "corner", tuple(float(c) for c in self.corner))
        object.__setattr__(self, "side", float(self.side))

    @classmethod
    def from_address(cls, address):
        corner = address.exact_corner()
        return cls(tuple(float(c) for c in corner), float(dyadic_side(address.level)), address)

    @property
    def dimension(self):
        return len(self.corner)

    @property
    def volume(self):
        return self.side ** self.dimension

    @property
    def center(self):
        return tuple(c + 0.5 * self.side for c in self.corner)

    @property
    def is_addressed(self):
        return self.address is not None

    @property
    def exact_corner(self):
        if self.address is not None:
            return self.address.exact_corner()
        return tuple(Fraction(c) for c in self.corner)

    @property
    def exact_side(self):
        if self.address is not None:
            return dyadic_side(self.address.level)
        return Fraction(self.side)

    def bounds(self):
        lo = np.asarray(self.corner, dtype=float)
        return lo, lo + self.side

    def contains_point(self, point):
        point = np.atleast_1d(np.asarray(point, dtype=float))
        lo, hi = self.bounds()
        return bool(np.all(point >= lo) and np.all(point < hi))

    def contains(self, other):
        lo, side = self.exact_corner, self.exact_side
        olo, oside = other.exact_corner, other.exact_side
        return all(a <= b and b + oside <= a + side for a, b in zip(lo, olo))

    def intersects(self, other):
        lo, side = self.exact_corner, self.exact_side
        olo, oside = other.exact_corner, other.exact_side
        return all(b < a + side and a < b + oside for a, b in zip(lo, olo))

    def triple(self):
        return Cube(tuple(c - self.side for c in self.corner), 3.0 * self.side)

    def to_dict(self):
        record = {"corner": list(self.corner), "side": self.side}
        if self.address is not None:
            record["address"] = self.address.to_dict()
        return record

    def __repr__(self):
        spans = " x ".join(f"[{c:g}, {c + self.side:g})" for c in self.corner)
        tag = f" @level {self.address.level}" if self.address is not None else ""
        return f"Cube({spans}{tag})"
