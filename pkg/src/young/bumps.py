# "src/young/bumps.py"

## Named Young functions of the bump conditions and the config grammar that selects them:
## - parse_young("logbump(r=2,s=1.5)"), positional or keyword arguments
## - The (phi1, phi2, psi) bumps of each theorem, built from an ExponentConfig
## - The tau functions (t^p / log(e+t)^{1+(p-1)delta}) and the gamma functions L(log L)^k
##   used when the sparse sums are collapsed

import logging
import re
from dataclasses import dataclass
from typing import Optional

from ..errors import ConfigError, ValidationError
from ..signal.exponents import conjugate
from .young_function import YoungFunction

logger = logging.getLogger(__name__)

_CALL = re.compile(r"^\s*([a-z]+)\s*(?:\((.*)\))?\s*$")
_SIGNATURES = {
    "power": ("p",),
    "logbump": ("r", "s"),
    "llogl": ("k",),
    "expl": (),
    "explpow": ("xi",),
    "reverselogbump": ("p", "c"),
}


def parse_young(text, line=None):
    """Young function from its config spelling, e.g. `llogl(1)` or `logbump(r=2.0,s=1.5)`."""
    match = _CALL.match(text)
    if not match or match.group(1) not in _SIGNATURES:
        raise ConfigError(f"unknown Young function {text.strip()!r}", line)
    family, body = match.group(1), match.group(2)
    names = _SIGNATURES[family]
    values = {}
    items = [item.strip() for item in body.split(",")] if body and body.strip() else []
    for position, item in enumerate(items):
        key, _, value = item.rpartition("=")
        key = key.strip() or (names[position] if position < len(names) else "")
        if key not in names or key in values:
            raise ConfigError(f"bad argument {item!r} for {family}", line)
        try:
            values[key] = float(value)
        except ValueError:
            raise ConfigError(f"argument {item!r} of {family} is not a number", line) from None
    if set(values) != set(names):
        raise ConfigError(f"{family} takes arguments {', '.join(names) or 'none'}", line)
    try:
        return YoungFunction(family, tuple(values[name] for name in names))
    except ValidationError as exc:
        raise ConfigError(str(exc), line) from None


@dataclass(frozen=True)
class BumpSelection:
    phi1: YoungFunction
    phi2: YoungFunction
    psi: Optional[YoungFunction] = None

    def to_dict(self):
        return {"phi1": str(self.phi1), "phi2": str(self.phi2), "psi": str(self.psi) if self.psi else None}


def thm_d_bumps(cfg):
    """phi_i = t^{p_i'} log(e+t)^{p_i' - 1 + delta}."""
    p1p, p2p = cfg.p1_prime, cfg.p2_prime
    return BumpSelection(
        YoungFunction.logbump(p1p, p1p - 1.0 + cfg.delta),
        YoungFunction.logbump(p2p, p2p - 1.0 + cfg.delta),
    )


def thm_a_bumps(cfg):
    p1p, p2p = cfg.p1_prime, cfg.p2_prime
    N, m, delta = cfg.N, cfg.m, cfg.delta
    psi = YoungFunction.llogl(cfg.q * N / (1.0 - cfg.q)) if cfg.q < 1 and N > 0 else None
    return BumpSelection(
        YoungFunction.logbump(p1p, (m + 1) * p1p - 1.0 + delta),
        YoungFunction.logbump(p2p, (N - m + 1) * p2p - 1.0 + delta),
        psi,
    )


def thm_b_bumps(cfg):
    """phi_1 = t^{(p1/r)'} log^{(mr+1)(p1/r)' - 1 + delta}, phi_2 likewise, psi = t^q log^{(N+1)q - 1 + delta}."""
    if cfg.r is None:
        raise ValidationError("these bumps need a Hölder pair (r, s)")
    a1, a2 = conjugate(cfg.p1 / cfg.r), conjugate(cfg.p2 / cfg.s)
    N, m, delta = cfg.N, cfg.m, cfg.delta
    return BumpSelection(
        YoungFunction.logbump(a1, (m * cfg.r + 1) * a1 - 1.0 + delta),
        YoungFunction.logbump(a2, ((N - m) * cfg.s + 1) * a2 - 1.0 + delta),
        YoungFunction.logbump(cfg.q, (N + 1) * cfg.q - 1.0 + delta),
    )


def thm_e_bumps(cfg):
    return thm_b_bumps(cfg.replace(N=0, m=0))


def thm_c_pair(cfg):
    """Phi = t^r log(e+t)^{mr}, Psi = t^s log(e+t)^{(N-m)s}."""
    if cfg.r is None:
        raise ValidationError("the maximal pair needs a Hölder pair (r, s)")
    return (
        YoungFunction.logbump(cfg.r, cfg.m * cfg.r),
        YoungFunction.logbump(cfg.s, (cfg.N - cfg.m) * cfg.s),
    )


def tau(p, delta):
    return YoungFunction.reverselogbump(p, 1.0 + (p - 1.0) * delta)


def tau_functions(cfg, theorem="thmA"):
    """The B_p companions of the phi bumps: (tau_1, tau_2) or (tau_1, tau_2, tau)."""
    if theorem in ("thmA", "thmD"):
        return tau(cfg.p1, cfg.delta), tau(cfg.p2, cfg.delta)
    return tau(cfg.p1 / cfg.r, cfg.delta), tau(cfg.p2 / cfg.s, cfg.delta), tau(cfg.q_prime, cfg.delta)


def gamma_functions(cfg, theorem="thmA"):
    """The L(log L)^k functions whose Orlicz averages carry the commutator symbols."""
    N, m = cfg.N, cfg.m
    if theorem == "thmA":
        ks = [m, N - m, cfg.q * N / (1.0 - cfg.q) if cfg.q < 1 else 0.0]
    else:
        ks = [m * cfg.r, (N - m) * cfg.s, N]
    return tuple(YoungFunction.llogl(k) if k > 0 else None for k in ks)


def theorem_bumps(theorem, cfg):
    builders = {
        "thmD": thm_d_bumps,
        "thmA": thm_a_bumps,
        "thmE": thm_e_bumps,
        "thmB": thm_b_bumps,
        "BMtw": thm_e_bumps,
    }
    if theorem not in builders:
        raise ValidationError(f"no bump functions attached to {theorem}")
    selection = builders[theorem](cfg)
    logger.debug("%s bumps: %s", theorem, selection.to_dict())
    return selection


# Example use case
if __name__ == "__main__":
    from ..signal.exponents import ExponentConfig

    cfg = ExponentConfig(alpha=0.5, p1=4.0, p2=4.0, q=3.0, r=2.0, N=1, m=1)
    print(thm_b_bumps(cfg).to_dict())
    print(parse_young("logbump(r=2, s=1.5)"))
