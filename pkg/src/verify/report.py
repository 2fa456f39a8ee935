# "src/verify/report.py"

## The `TheoremReport` record produced by every verification run:
## - theorem id, exponents, condition constants and observed ratios per resolution
## - trend classifications and the pass/fail outcome of the acceptance rule
## - provenance (weights, family manifest, seed) and free-form notes
## - a versioned JSON form with a content hash, and flat CSV rows with fixed columns

import hashlib
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np

from ..errors import ValidationError
from ..signal.exponents import THEOREMS
from .trend import drift

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_COLUMNS = ("theorem", "n", "alpha", "p1", "p2", "q", "r", "s", "scale", "constant", "ratio", "drift")

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
NOT_APPLICABLE = "not-applicable"
EXPLORATORY = "exploratory"


def _json_number(value):
    if value is None:
        return None
    value = float(value)
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if math.isnan(value):
        return "nan"
    return value


def jsonable(record):
    if isinstance(record, dict):
        return {str(key): jsonable(value) for key, value in record.items()}
    if isinstance(record, (list, tuple)):
        return [jsonable(value) for value in record]
    if isinstance(record, np.generic):
        return jsonable(record.item())
    if isinstance(record, float):
        return _json_number(record)
    return record


@dataclass
class TheoremReport:
    theorem: str
    cfg: object
    scales: List[int] = field(default_factory=list)
    constants: List[Optional[float]] = field(default_factory=list)
    ratios: List[Optional[float]] = field(default_factory=list)
    condition_trend: Optional[str] = None
    ratio_trend: Optional[str] = None
    status: str = INCONCLUSIVE
    scale_kind: str = "level"
    sections: Dict[str, dict] = field(default_factory=dict)
    provenance: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        if self.theorem not in THEOREMS:
            raise ValidationError(f"unknown theorem id {self.theorem!r}")
        for value in self.ratios:
            if value is not None and value < 0:
                raise ValidationError("observed ratios are nonnegative")

    @property
    def passed(self):
        return self.status == PASS

    @property
    def ratio(self):
        """The observed ratio at the finest resolution."""
        finite = [r for r in self.ratios if r is not None]
        return finite[-1] if finite else None

    @property
    def constant(self):
        finite = [c for c in self.constants if c is not None]
        return finite[-1] if finite else None

    def note(self, message):
        logger.warning("%s: %s", self.theorem, message)
        self.notes.append(message)

    # -- serialization ------------------------------------------------------------------------

    def to_dict(self):
        cfg = self.cfg.to_dict() if self.cfg is not None else None
        return jsonable({
            "schema": SCHEMA_VERSION,
            "theorem": self.theorem,
            "cfg": cfg,
            "scale_kind": self.scale_kind,
            "scales": list(self.scales),
            "constants": list(self.constants),
            "ratios": list(self.ratios),
            "condition_trend": self.condition_trend,
            "ratio_trend": self.ratio_trend,
            "status": self.status,
            "sections": self.sections,
            "provenance": self.provenance,
            "notes": list(self.notes),
        })

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def content_hash(self):
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    def csv_rows(self):
        """One row per resolution, with the drift of the ratio ladder up to that row."""
        cfg = self.cfg
        rows = []
        for index, scale in enumerate(self.scales):
            constant = self.constants[index] if index < len(self.constants) else None
            ratio = self.ratios[index] if index < len(self.ratios) else None
            ladder = [r for r in self.ratios[: index + 1] if r is not None]
            rows.append({
                "theorem": self.theorem,
                "n": cfg.n,
                "alpha": cfg.alpha,
                "p1": cfg.p1,
                "p2": cfg.p2,
                "q": cfg.q,
                "r": cfg.r,
                "s": cfg.s,
                "scale": scale,
                "constant": constant,
                "ratio": ratio,
                "drift": drift(ladder) if len(ladder) > 1 else 0.0,
            })
        return rows

    def summary(self):
        ratio = "n/a" if self.ratio is None else f"{self.ratio:.6g}"
        constant = "n/a" if self.constant is None else f"{self.constant:.6g}"
        return (
            f"{self.theorem}: {self.status} (condition {constant} [{self.condition_trend}], "
            f"ratio {ratio} [{self.ratio_trend}])"
        )
