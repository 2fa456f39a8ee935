# "src/young/bp_condition.py"

## The B_p integrability condition  ∫_1^∞ Phi(t) t^{-p-1} dt < ∞:
## - Symbolic rule on the growth signature (r, s) of Phi ~ t^r log^s:
##   in B_p iff r < p, or r = p and s < -1; exponential growth is never in B_p
## - Numeric certificate: the integral split into decades up to T = 1e12, each decade
##   integrated in the variable u = log t, and a fitted decay exponent of the increments

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.integrate import quad

from ..errors import IndeterminateError, ValidationError

logger = logging.getLogger(__name__)

IN_BP = "InBp"
NOT_IN_BP = "NotInBp"
INDETERMINATE = "Indeterminate"

DECADES = 12
CAUCHY_TOL = 1e-9
TIE_TOL = 1e-12


@dataclass
class BpCertificate:
    increments: list
    decay_exponent: float
    verdict: str

    def to_dict(self):
        return {"increments": self.increments, "decay_exponent": self.decay_exponent, "verdict": self.verdict}


@dataclass
class BpResult:
    verdict: str
    p: float
    method: str
    reason: str
    certificate: Optional[BpCertificate] = field(default=None)

    @property
    def in_bp(self):
        return self.verdict == IN_BP

    def to_dict(self):
        record = {"verdict": self.verdict, "p": self.p, "method": self.method, "reason": self.reason}
        if self.certificate is not None:
            record["certificate"] = self.certificate.to_dict()
        return record


def symbolic_verdict(growth, p):
    if growth is None:
        return NOT_IN_BP, "exponential growth"
    r, s = growth
    if r < p - TIE_TOL:
        return IN_BP, f"growth exponent {r:g} < p = {p:g}"
    if r > p + TIE_TOL:
        return NOT_IN_BP, f"growth exponent {r:g} > p = {p:g}"
    if s < -1:
        return IN_BP, f"growth exponent equals p and log exponent {s:g} < -1"
    return NOT_IN_BP, f"growth exponent equals p and log exponent {s:g} >= -1"


def decade_increments(phi, p, decades=DECADES):
    """∫ over [10^k, 10^{k+1}] of Phi(t) t^{-p-1} dt for k = 0 .. decades-1."""
    step = math.log(10.0)
    increments = []
    for k in range(decades):
        value, _ = quad(
            lambda u: math.exp(min(float(phi.log_evaluate(u)) - p * u, 700.0)),
            k * step, (k + 1) * step, epsrel=1e-10, limit=200,
        )
        increments.append(value)
    return increments


def numeric_certificate(phi, p, decades=DECADES):
    """Fit increments I_k ~ k^{-c}; c > 1.25 converges, c < 0.75 diverges, otherwise undecided."""
    increments = decade_increments(phi, p, decades)
    tail = np.array(increments[1:])
    if not np.all(np.isfinite(tail)):
        return BpCertificate(increments, -math.inf, NOT_IN_BP)
    if tail[-1] < CAUCHY_TOL:
        return BpCertificate(increments, math.inf, IN_BP)
    index = np.arange(2, decades + 1, dtype=float)
    late = slice(len(tail) // 2, None)
    slope = np.polyfit(np.log(index[late]), np.log(tail[late]), 1)[0]
    c = -float(slope)
    if c > 1.25:
        verdict = IN_BP
    elif c < 0.75:
        verdict = NOT_IN_BP
    else:
        verdict = INDETERMINATE
    return BpCertificate(increments, c, verdict)


def bp_check(phi, p, numeric=True):
    """Decide whether phi (a Young function or an associate) satisfies B_p."""
    if not p > 1:
        raise ValidationError(f"B_p needs p > 1, got {p}")
    certificate = numeric_certificate(phi, p) if numeric else None
    growth = phi.growth
    if growth is not None or phi.exponential_growth:
        verdict, reason = symbolic_verdict(growth, p)
        if certificate is not None and certificate.verdict not in (verdict, INDETERMINATE):
            logger.debug("numeric B_p certificate for %s disagrees (%s); symbolic rule wins", phi, certificate.verdict)
        return BpResult(verdict, p, "symbolic", reason, certificate)
    if certificate is None:
        certificate = numeric_certificate(phi, p)
    if certificate.verdict == INDETERMINATE:
        raise IndeterminateError(f"B_{p:g} membership of {phi} undecided (decay exponent {certificate.decay_exponent:.3g})")
    return BpResult(certificate.verdict, p, "numeric", "decade increments", certificate)
