# "src/young/young_function.py"

## The Young-function families used by the bump conditions:
## - Power(p) = t^p, LogBump(r, s) = t^r log(e+t)^s, LLogL(k) = t log(e+t)^k,
##   ReverseLogBump(p, c) = t^p / log(e+t)^c  (all share the "poly-log" evaluator)
## - ExpL = e^t - 1 and ExpLPow(xi) = e^{t^{1/xi}} - 1, written with expm1
## - Evaluation, derivative, log-evaluation log Phi(e^u) for tail integrals, and the inverse
## - The growth signature (polynomial exponent, log exponent) that decides B_p membership
## - The numeric associate (complementary function) Phi-bar(s) = sup_t (s t - Phi(t))

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from ..errors import ValidationError

logger = logging.getLogger(__name__)

POLYLOG_FAMILIES = ("power", "logbump", "llogl", "reverselogbump")
EXP_FAMILIES = ("expl", "explpow")
INVERSE_RTOL = 1e-13
_TINY = 1e-300


def _log_e_plus(t):
    return np.log(np.e + t)


def _root(func, target, start=1.0):
    """Solve func(x) = target for increasing func on [0, inf) by bracket doubling and brentq."""
    if target <= 0:
        return 0.0
    if math.isinf(target):
        return math.inf
    hi = start
    while func(hi) < target:
        hi *= 2.0
        if hi > 1e300:
            return math.inf
    lo = 0.0
    return brentq(lambda x: func(x) - target, lo, hi, xtol=_TINY, rtol=INVERSE_RTOL, maxiter=500)


@dataclass(frozen=True)
class YoungFunction:
    family: str
    params: Tuple[float, ...] = ()

    def __post_init__(self):
        params = tuple(float(v) for v in self.params)
        object.__setattr__(self, "params", params)
        if self.family not in POLYLOG_FAMILIES + EXP_FAMILIES:
            raise ValidationError(f"unknown Young function family {self.family!r}")
        if self.family == "power" and not params[0] > 1:
            raise ValidationError("power(p) needs p > 1 to be superlinear")
        if self.family in ("logbump", "reverselogbump") and not params[0] >= 1:
            raise ValidationError(f"{self.family} needs a polynomial exponent >= 1")
        r, s = self.polylog if self.family in POLYLOG_FAMILIES else (2.0, 0.0)
        if r == 1 and not s > 0:
            raise ValidationError(f"{self} is not superlinear")
        if self.family == "explpow" and not params[0] > 0:
            raise ValidationError("explpow(xi) needs xi > 0")

    # -- constructors -----------------------------------------------------------------------

    @classmethod
    def power(cls, p):
        return cls("power", (p,))

    @classmethod
    def logbump(cls, r, s):
        return cls("logbump", (r, s))

    @classmethod
    def llogl(cls, k):
        return cls("llogl", (k,))

    @classmethod
    def expl(cls):
        return cls("expl", ())

    @classmethod
    def explpow(cls, xi):
        return cls("explpow", (xi,))

    @classmethod
    def reverselogbump(cls, p, c):
        return cls("reverselogbump", (p, c))

    # -- shape ------------------------------------------------------------------------------

    @property
    def polylog(self):
        """(r, s) with Phi(t) = t^r log(e+t)^s, for the poly-log families."""
        if self.family == "power":
            return self.params[0], 0.0
        if self.family == "logbump":
            return self.params
        if self.family == "llogl":
            return 1.0, self.params[0]
        if self.family == "reverselogbump":
            return self.params[0], -self.params[1]
        raise AttributeError(f"{self.family} is not a poly-log family")

    @property
    def growth(self):
        """(growth exponent, log exponent), or None for exponential growth."""
        if self.family in POLYLOG_FAMILIES:
            return self.polylog
        return None

    @property
    def exponential_growth(self):
        return self.family in EXP_FAMILIES

    @property
    def convex_from(self):
        """Left end of the range where Phi is convex (0 except for explpow with xi > 1)."""
        if self.family == "explpow" and self.params[0] > 1:
            xi = self.params[0]
            return (xi - 1.0) ** xi
        return 0.0

    # -- evaluation -------------------------------------------------------------------------

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            if self.family in POLYLOG_FAMILIES:
                r, s = self.polylog
                out = t ** r * _log_e_plus(t) ** s
            elif self.family == "expl":
                out = np.expm1(t)
            else:
                out = np.expm1(t ** (1.0 / self.params[0]))
        out = np.where(t > 0, out, 0.0)
        return out if out.ndim else float(out)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            if self.family in POLYLOG_FAMILIES:
                r, s = self.polylog
                log_term = _log_e_plus(t)
                out = r * t ** (r - 1.0) * log_term ** s + s * t ** r * log_term ** (s - 1.0) / (np.e + t)
            elif self.family == "expl":
                out = np.exp(t)
            else:
                a = 1.0 / self.params[0]
                out = np.exp(t ** a) * a * t ** (a - 1.0)
        return out if out.ndim else float(out)

    def log_evaluate(self, u):
        """log Phi(e^u), finite for every real u."""
        u = np.asarray(u, dtype=float)
        if self.family in POLYLOG_FAMILIES:
            r, s = self.polylog
            out = r * u + s * np.log(np.logaddexp(1.0, u))
        else:
            a = 1.0 if self.family == "expl" else 1.0 / self.params[0]
            x = np.exp(a * u)
            with np.errstate(over="ignore"):
                out = np.where(x > 30.0, x + np.log1p(-np.exp(-np.minimum(x, 700.0))), np.log(np.expm1(x)))
        return out if out.ndim else float(out)

    def _inverse_scalar(self, t):
        if self.family == "power":
            return t ** (1.0 / self.params[0])
        if self.family == "expl":
            return math.log1p(t)
        if self.family == "explpow":
            return math.log1p(t) ** self.params[0]
        return _root(self, t)

    def inverse(self, t):
        """Phi^{-1}(t), elementwise."""
        if np.ndim(t) == 0:
            return float(self._inverse_scalar(float(t)))
        return np.vectorize(self._inverse_scalar, otypes=[float])(t)

    def associate(self):
        return AssociateFunction(self)

    def is_valid(self, samples=200):
        """Phi(0) = 0, increasing and convex on a log-spaced sample, and Phi(t)/t increasing past t = 1."""
        top = 1e6
        if self.exponential_growth:
            top = min(top, 500.0 ** (self.params[0] if self.params else 1.0))
        t = np.geomspace(max(self.convex_from, 1e-6), top, samples)
        values = self(t)
        increasing = bool(np.all(np.diff(values) > 0))
        slopes = np.diff(values) / np.diff(t)
        convex = bool(np.all(np.diff(slopes) >= -1e-9 * np.abs(slopes[1:])))
        decades = np.geomspace(max(self.convex_from, 1.0), top, 7)
        superlinear = bool(np.all(np.diff(self(decades) / decades) > 0))
        return self(0.0) == 0.0 and increasing and convex and superlinear

    def __str__(self):
        names = {
            "power": ("p",), "logbump": ("r", "s"), "llogl": ("k",),
            "expl": (), "explpow": ("xi",), "reverselogbump": ("p", "c"),
        }[self.family]
        if not names:
            return self.family
        args = ",".join(f"{name}={value:g}" for name, value in zip(names, self.params))
        return f"{self.family}({args})"


@dataclass(frozen=True)
class AssociateFunction:
    """Numeric complementary function Phi-bar(s) = sup_{t >= 0} (s t - Phi(t))."""

    base: YoungFunction

    def maximizer(self, s):
        """The t attaining the supremum (0 when the supremum is attained at the origin)."""
        phi = self.base
        if s <= 0:
            return 0.0
        if phi.family == "power":
            p = phi.params[0]
            return (s / p) ** (1.0 / (p - 1.0))
        if phi.family == "expl":
            return math.log(s) if s > 1 else 0.0
        # on [0, t_c] Phi is concave, so s t - Phi(t) peaks at an endpoint there
        t_c = phi.convex_from
        if s <= phi.derivative(t_c):
            t_star = t_c
        else:
            t_star = t_c + _root(lambda x: phi.derivative(t_c + x), s)
        if t_star == 0.0 or s * t_star - phi(t_star) <= 0:
            return 0.0
        return t_star

    def _value_scalar(self, s):
        t_star = self.maximizer(s)
        if t_star == 0.0 or math.isinf(t_star):
            return 0.0 if t_star == 0.0 else math.inf
        return max(s * t_star - self.base(t_star), 0.0)

    def __call__(self, s):
        if np.ndim(s) == 0:
            return self._value_scalar(float(s))
        return np.vectorize(self._value_scalar, otypes=[float])(s)

    def derivative(self, s):
        if np.ndim(s) == 0:
            return self.maximizer(float(s))
        return np.vectorize(self.maximizer, otypes=[float])(s)

    def log_evaluate(self, u):
        with np.errstate(divide="ignore"):
            return np.log(self(np.exp(u)))

    def inverse(self, t):
        if np.ndim(t) == 0:
            return float(_root(self._value_scalar, float(t)))
        return np.vectorize(lambda v: _root(self._value_scalar, v), otypes=[float])(t)

    @property
    def growth(self) -> Optional[Tuple[float, float]]:
        """Growth signature of the associate: t^r log^s has associate ~ t^{r'} log^{-s/(r-1)}."""
        family = self.base.family
        if family in POLYLOG_FAMILIES:
            r, s = self.base.polylog
            if r == 1:
                return None  # exponential growth, exp(t^{1/s})
            return r / (r - 1.0), -s / (r - 1.0)
        if family == "expl":
            return 1.0, 1.0
        return 1.0, self.base.params[0]

    @property
    def exponential_growth(self):
        return self.base.family in POLYLOG_FAMILIES and self.base.polylog[0] == 1

    @property
    def convex_from(self):
        return 0.0

    def associate(self):
        return self.base

    def __str__(self):
        return f"associate({self.base})"


# Example use case
if __name__ == "__main__":
    phi = YoungFunction.logbump(2.0, 1.0)
    bar = phi.associate()
    for t in (1e-3, 1.0, 1e3):
        print(t, phi.inverse(t) * bar.inverse(t) / t)
