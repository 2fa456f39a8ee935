# "src/signal/exponents.py"

## The `ExponentConfig` dataclass holding (n, alpha, p1, p2, p, q, r, s, N, m, delta):
## - Derived exponent p with 1/p = 1/p1 + 1/p2 and conjugates p', p1', p2'
## - Optional Hölder pair (r, s); giving only r fills in s = r'
## - Optional Sobolev scaling 1/q = 1/p - alpha/n
## - `require(theorem)` checks the exponent hypotheses each theorem states

from dataclasses import asdict, dataclass, replace
from typing import Optional

from ..errors import HypothesisViolation, ValidationError

TOLERANCE = 1e-12

THEOREMS = (
    "thmD", "thmE", "thmA", "thmB", "thmF", "thmC", "thmG-weak", "thmG-necessity",
    "thmH", "thmI", "BMtw", "BM-onevec", "steinweiss", "section10-example", "exploratory",
)


def conjugate(p):
    if p == 1:
        return float("inf")
    return p / (p - 1.0)


@dataclass(frozen=True)
class ExponentConfig:
    n: int = 1
    alpha: float = 0.0
    p1: float = 2.0
    p2: float = 2.0
    q: Optional[float] = None
    r: Optional[float] = None
    s: Optional[float] = None
    N: int = 0
    m: int = 0
    delta: float = 0.5
    sobolev: bool = False

    def __post_init__(self):
        if self.n not in (1, 2):
            raise ValidationError(f"dimension n must be 1 or 2, got {self.n}")
        if not 0 <= self.alpha < self.n:
            raise ValidationError(f"alpha must lie in [0, n), got {self.alpha}")
        if not (self.p1 > 0 and self.p2 > 0):
            raise ValidationError("p1 and p2 must be positive")
        if self.q is None:
            if not self.sobolev:
                object.__setattr__(self, "q", self.p)
            else:
                inverse = 1.0 / self.p - self.alpha / self.n
                if inverse <= 0:
                    raise HypothesisViolation("Sobolev scaling", "1/p - alpha/n > 0")
                object.__setattr__(self, "q", 1.0 / inverse)
        if not self.q > 0:
            raise ValidationError(f"q must be positive, got {self.q}")
        if self.sobolev and abs(1.0 / self.q - (1.0 / self.p - self.alpha / self.n)) > TOLERANCE:
            raise HypothesisViolation("Sobolev scaling", "1/q = 1/p - alpha/n")
        if self.r is not None and self.s is None:
            object.__setattr__(self, "s", conjugate(self.r))
        if self.s is not None and self.r is None:
            object.__setattr__(self, "r", conjugate(self.s))
        if self.r is not None:
            if not (self.r > 1 and self.s > 1):
                raise ValidationError("Hölder pair entries must exceed 1")
            if abs(1.0 / self.r + 1.0 / self.s - 1.0) > TOLERANCE:
                raise ValidationError("Hölder pair must satisfy 1/r + 1/s = 1")
        if self.N < 0 or not 0 <= self.m <= self.N:
            raise ValidationError("commutator counts need 0 <= m <= N")
        if not self.delta > 0:
            raise ValidationError("log-bump slack delta must be positive")

    @property
    def p(self):
        return 1.0 / (1.0 / self.p1 + 1.0 / self.p2)

    @property
    def p1_prime(self):
        return conjugate(self.p1)

    @property
    def p2_prime(self):
        return conjugate(self.p2)

    @property
    def q_prime(self):
        return conjugate(self.q)

    @property
    def prefactor_exponent(self):
        """Exponent of |Q| in the bump displays: alpha/n + 1/q - 1/p."""
        return self.alpha / self.n + 1.0 / self.q - 1.0 / self.p

    def with_natural_pair(self):
        """The Hölder pair r = p1/p, s = p2/p."""
        return replace(self, r=self.p1 / self.p, s=self.p2 / self.p)

    def replace(self, **changes):
        return replace(self, **changes)

    def to_dict(self):
        record = asdict(self)
        record["p"] = self.p
        return record

    # -- theorem hypotheses ---------------------------------------------------------------

    def _need(self, theorem, condition, relation):
        if not condition:
            raise HypothesisViolation(theorem, relation)

    def _need_pair(self, theorem, strict):
        self._need(theorem, self.r is not None, "a Hölder pair (r, s)")
        if strict:
            self._need(theorem, self.p1 > self.r, "p1 > r")
            self._need(theorem, self.p2 > self.s, "p2 > s")
        else:
            self._need(theorem, self.p1 >= self.r, "p1 >= r")
            self._need(theorem, self.p2 >= self.s, "p2 >= s")

    def require(self, theorem):
        """Raise HypothesisViolation naming the first failed exponent relation of `theorem`."""
        if theorem not in THEOREMS:
            raise ValidationError(f"unknown theorem id {theorem!r}")
        need = lambda condition, relation: self._need(theorem, condition, relation)
        p, q = self.p, self.q
        if theorem in ("thmD", "thmA"):
            need(self.alpha > 0, "0 < alpha < n")
            need(self.p1 > 1 and self.p2 > 1, "p1, p2 > 1")
            need(0.5 < p <= q + TOLERANCE and q <= 1, "1/2 < p <= q <= 1")
        elif theorem in ("thmE", "thmB"):
            need(self.alpha > 0, "0 < alpha < n")
            self._need_pair(theorem, strict=True)
            need(1 < p <= q + TOLERANCE, "1 < p <= q < inf")
        elif theorem in ("thmF", "thmC"):
            need(self.alpha > 0, "0 < alpha < n")
            need(self.r is not None, "a Hölder pair (r, s)")
        elif theorem in ("thmG-weak", "thmG-necessity"):
            self._need_pair(theorem, strict=False)
            need(1 < p <= q + TOLERANCE, "1 < p <= q")
        elif theorem == "thmH":
            self._need_pair(theorem, strict=True)
            need(1 < p <= q + TOLERANCE, "1 < p <= q")
        elif theorem == "thmI":
            self._need_pair(theorem, strict=True)
            need(abs(1.0 / q - (1.0 / p - self.alpha / self.n)) <= TOLERANCE, "1/q = 1/p - alpha/n")
        elif theorem == "BMtw":
            self._need_pair(theorem, strict=True)
            need(self.alpha == 0 and abs(q - p) <= TOLERANCE, "alpha = 0 and q = p")
            need(p > 1, "1 < p")
        elif theorem == "BM-onevec":
            need(self.p1 > 1 and self.p2 > 1, "p1, p2 > 1")
            need(p >= 1, "p >= 1")
        elif theorem in ("steinweiss", "section10-example"):
            need(self.p1 > 1 and self.p2 > 1, "1 < p1, p2 < inf")
            need(1 < p <= q + TOLERANCE, "1 < p <= q < inf")
        elif theorem == "exploratory":
            need(p <= 1 <= q, "p <= 1 <= q")
        if theorem in ("thmA", "thmB", "thmC"):
            need(self.N >= 1, "a commutator of arity N >= 1")
        return self
