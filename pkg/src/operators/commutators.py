# "src/operators/commutators.py"

## Implements the `CommutatorSpec` class and the iterated commutators of BI_alpha,
## computed two independent ways:
## - commutator_direct: the nested definition [b, T]_1(f, g) = b T(f, g) - T(b f, g)
##   (slot 2 multiplies g instead), unrolled into 2^N calls of bi_alpha
## - commutator_kernel: one pass with the product weight
##   Π_{slot 1} (b_i(x) - b_i(x - y)) Π_{slot 2} (b_i(x) - b_i(x + y)) on every y-cell

import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import ResourceLimitError, ValidationError
from ..signal.grid_function import GridFunction
from ..weights.bmo import bmo_norm
from .bilinear import bi_alpha
from .kernels import kernel_weights, reach, require_inputs, require_order, shifted_sum

logger = logging.getLogger(__name__)

MAX_DIRECT_SYMBOLS = 4


@dataclass
class CommutatorSpec:
    symbols: List[GridFunction]
    slots: List[int]

    def __post_init__(self):
        if len(self.symbols) != len(self.slots):
            raise ValidationError("every commutator symbol needs exactly one slot")
        if not self.symbols:
            raise ValidationError("a commutator needs at least one symbol")
        if any(slot not in (1, 2) for slot in self.slots):
            raise ValidationError(f"slots must be 1 or 2, got {list(self.slots)}")
        require_inputs(*self.symbols)
        # canonical order (1, ..., 1, 2, ..., 2); the sort is stable inside each slot
        order = sorted(range(len(self.slots)), key=lambda i: self.slots[i])
        self.symbols = [self.symbols[i] for i in order]
        self.slots = [int(self.slots[i]) for i in order]

    @property
    def N(self):
        return len(self.symbols)

    @property
    def m(self):
        return self.slots.count(1)

    def bmo_product(self, scan):
        """||b||: the product of the symbols' BMO norms over the scan."""
        return float(np.prod([float(bmo_norm(b, scan)) for b in self.symbols]))

    def to_dict(self):
        return {"N": self.N, "m": self.m, "slots": self.slots}


def commutator_direct(spec, f, g, alpha, threads=1):
    if spec.N > MAX_DIRECT_SYMBOLS:
        raise ResourceLimitError(
            f"the nested route costs 2^N operator calls; N = {spec.N} exceeds {MAX_DIRECT_SYMBOLS}"
        )
    require_inputs(f, g, *spec.symbols)
    require_order(alpha, f.dimension)

    def apply(depth, f, g):
        if depth == 0:
            return bi_alpha(f, g, alpha, threads).values
        b, slot = spec.symbols[depth - 1], spec.slots[depth - 1]
        inner = apply(depth - 1, f, g)
        if slot == 1:
            moved = apply(depth - 1, b * f, g)
        else:
            moved = apply(depth - 1, f, b * g)
        return b.values * inner - moved

    values = apply(spec.N, f, g)
    logger.debug("nested commutator N=%d m=%d: %d operator calls", spec.N, spec.m, 2 ** spec.N)
    return f.like(values)


def commutator_kernel(spec, f, g, alpha, threads=1):
    """spec = None gives BI_alpha itself (empty products)."""
    symbols = [] if spec is None else list(zip(spec.symbols, spec.slots))
    require_inputs(f, g, *(b for b, _ in symbols))
    require_order(alpha, f.dimension)
    extent = reach(f.size)
    table = kernel_weights(f.dimension, alpha, f.level, extent)
    fv, gv = f.values, g.values
    bs = [(b.values, slot) for b, slot in symbols]

    def term(offset, out, minus, plus):
        weight = fv[minus] * gv[plus] * table[tuple(offset + extent)]
        for b, slot in bs:
            weight = weight * (b[out] - (b[minus] if slot == 1 else b[plus]))
        return weight

    return f.like(shifted_sum(term, fv.shape, f.size, f.dimension, threads))


# Example use case
if __name__ == "__main__":
    from ..dyadic.cube import Cube

    f = GridFunction.indicator(Cube((0.0,), 1.0), 1, 1, 6)
    b = GridFunction.from_function(np.sin, 1, 1, 6)
    spec = CommutatorSpec([b], [1])
    direct = commutator_direct(spec, f, f, 0.5)
    kernel = commutator_kernel(spec, f, f, 0.5)
    print(float(np.max(np.abs(direct.values - kernel.values))))
