"""FAIR scenario ontology: three-point estimates, scenario trees and their validation."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal, Sequence

from .errors import EstimateError, ScenarioError

Unit = Literal["rate", "probability", "currency"]

DIMENSIONS = {
    "data-protection": "Data protection (GDPR art. 5(f), 32)",
    "fairness": "Fairness (AI Act art. 10(f)(g))",
    "accuracy-robustness": "Accuracy and robustness (AI Act art. 15(1)(2)(3))",
    "information-security": "Information security (AI Act art. 15(4)(5))",
}


@dataclass(frozen=True)
class CalibratedEstimate:
    """A (min, most likely, max) estimate.

    Construction does not validate, so that :func:`validate_scenario` can
    report every broken estimate at once; call :meth:`check` before use.
    """

    min: float
    most_likely: float
    max: float
    unit: Unit = "currency"

    def violations(self, name: str = "estimate") -> list["Violation"]:
        out = []
        vals = (self.min, self.most_likely, self.max)
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in vals):
            return [Violation(name, "finite", vals)]
        if not self.min <= self.most_likely <= self.max:
            out.append(Violation(name, "ordering min <= most_likely <= max", vals))
        if self.unit == "probability" and not (0.0 <= self.min and self.max <= 1.0):
            out.append(Violation(name, "probability bound [0, 1]", vals))
        if self.unit in ("rate", "currency") and self.min < 0:
            out.append(Violation(name, "non-negative", vals))
        return out

    def check(self, name: str = "estimate") -> "CalibratedEstimate":
        v = self.violations(name)
        if v:
            raise EstimateError("; ".join(f"{x.field}: {x.rule} ({x.value!r})" for x in v))
        return self

    @property
    def is_point(self) -> bool:
        return self.min == self.max

    def scaled(self, c: float) -> "CalibratedEstimate":
        return replace(self, min=self.min * c, most_likely=self.most_likely * c, max=self.max * c)

    def to_dict(self) -> dict:
        return {"min": self.min, "most_likely": self.most_likely, "max": self.max}

    @classmethod
    def from_dict(cls, d: dict, unit: Unit) -> "CalibratedEstimate":
        try:
            return cls(float(d["min"]), float(d["most_likely"]), float(d["max"]), unit)
        except (KeyError, TypeError, ValueError) as exc:
            raise EstimateError(f"malformed estimate {d!r}: {exc}") from None

    @classmethod
    def point(cls, x: float, unit: Unit = "currency") -> "CalibratedEstimate":
        return cls(x, x, x, unit)


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    value: Any


@dataclass(frozen=True)
class VulnerabilityNode:
    """Either a direct vulnerability probability or a threat-capability / resistance-strength pair."""

    direct: CalibratedEstimate | None = None
    tcap: CalibratedEstimate | None = None
    rs: CalibratedEstimate | None = None

    @property
    def is_direct(self) -> bool:
        return self.direct is not None

    def violations(self) -> list[Violation]:
        has_pair = self.tcap is not None or self.rs is not None
        if self.direct is not None and has_pair:
            return [Violation("vulnerability", "exactly one form (direct or tcap/rs)", "both")]
        if self.direct is None and not has_pair:
            return [Violation("vulnerability", "exactly one form (direct or tcap/rs)", "neither")]
        if self.direct is not None:
            return self.direct.violations("vulnerability.direct")
        if self.tcap is None or self.rs is None:
            missing = "tcap" if self.tcap is None else "rs"
            return [Violation(f"vulnerability.{missing}", "required with its pair", None)]
        return self.tcap.violations("vulnerability.tcap") + self.rs.violations("vulnerability.rs")

    def to_dict(self) -> dict:
        if self.direct is not None and self.tcap is None and self.rs is None:
            return {"direct": self.direct.to_dict()}
        out = {}
        if self.direct is not None:
            out["direct"] = self.direct.to_dict()
        if self.tcap is not None:
            out["tcap"] = self.tcap.to_dict()
        if self.rs is not None:
            out["rs"] = self.rs.to_dict()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "VulnerabilityNode":
        def get(key):
            return CalibratedEstimate.from_dict(d[key], "probability") if key in d else None

        return cls(direct=get("direct"), tcap=get("tcap"), rs=get("rs"))


@dataclass(frozen=True)
class Scenario:
    name: str
    perspective: str
    dimensions: tuple[str, ...]
    tef: CalibratedEstimate
    vulnerability: VulnerabilityNode
    primary_loss: CalibratedEstimate
    secondary_loss_frequency: CalibratedEstimate
    secondary_loss_magnitude: CalibratedEstimate
    currency: str = "USD"
    notes: str = ""

    _ESTIMATES = (
        ("tef", "rate"),
        ("primary_loss", "currency"),
        ("secondary_loss_frequency", "probability"),
        ("secondary_loss_magnitude", "currency"),
    )

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "perspective": self.perspective,
            "dimensions": list(self.dimensions),
            "currency": self.currency,
            "tef": self.tef.to_dict(),
            "vulnerability": self.vulnerability.to_dict(),
            "primary_loss": self.primary_loss.to_dict(),
            "secondary_loss_frequency": self.secondary_loss_frequency.to_dict(),
            "secondary_loss_magnitude": self.secondary_loss_magnitude.to_dict(),
        }
        if self.notes:
            out["notes"] = self.notes
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        required = ["name", "tef", "vulnerability", "primary_loss",
                    "secondary_loss_frequency", "secondary_loss_magnitude"]
        missing = [k for k in required if k not in d]
        if missing:
            raise ScenarioError([Violation(k, "required field", None) for k in missing])
        kw = {name: CalibratedEstimate.from_dict(d[name], unit) for name, unit in cls._ESTIMATES}
        return cls(
            name=str(d["name"]),
            perspective=str(d.get("perspective", "")),
            dimensions=tuple(d.get("dimensions", ())),
            vulnerability=VulnerabilityNode.from_dict(d["vulnerability"]),
            currency=str(d.get("currency", "USD")),
            notes=str(d.get("notes", "")),
            **kw,
        )

    @classmethod
    def load(cls, path: str | Path) -> "Scenario":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def scenario_violations(s: Scenario) -> list[Violation]:
    out = []
    if not s.dimensions:
        out.append(Violation("dimensions", "non-empty", list(s.dimensions)))
    for dim in s.dimensions:
        if dim not in DIMENSIONS:
            out.append(Violation("dimensions", f"one of {sorted(DIMENSIONS)}", dim))
    for name, unit in Scenario._ESTIMATES:
        est = getattr(s, name)
        if est.unit != unit:
            out.append(Violation(name, f"unit {unit}", est.unit))
        out.extend(est.violations(name))
    out.extend(s.vulnerability.violations())
    return out


def validate_scenario(s: Scenario) -> Scenario:
    """Return ``s`` unchanged if valid, else raise ScenarioError listing every violation."""
    v = scenario_violations(s)
    if v:
        raise ScenarioError(v)
    return s


def pert_point_estimate(e: CalibratedEstimate) -> float:
    e.check()
    # (a + 4b + c) / 6 written as an offset from a: exact for point estimates
    x = e.min + (4.0 * (e.most_likely - e.min) + (e.max - e.min)) / 6.0
    return min(max(x, e.min), e.max)


def nearest_rank_index(q: float, n: int) -> int:
    """0-based index of the nearest-rank q-quantile in a sorted sample of size n."""
    if not 0.0 < q <= 1.0:
        raise ValueError(f"quantile level {q!r} outside (0, 1]")
    # q is taken at its shortest decimal repr so that 0.1 * 30 ranks 3, not 4
    k = math.ceil(Fraction(repr(float(q))) * n)
    return max(k, 1) - 1


def calibrate_from_samples(
    values: Sequence[float],
    low_pct: float = 0.10,
    mode_pct: float = 0.50,
    high_pct: float = 0.90,
    unit: Unit = "currency",
) -> CalibratedEstimate:
    """Three-point estimate from nearest-rank percentiles of an observed sample."""
    if len(values) == 0:
        raise EstimateError("cannot calibrate from an empty sample")
    if not 0.0 < low_pct < mode_pct < high_pct <= 1.0:
        raise EstimateError(f"percentiles must satisfy 0 < low < mode < high <= 1, got {(low_pct, mode_pct, high_pct)}")
    xs = sorted(float(v) for v in values)
    n = len(xs)
    lo, ml, hi = (xs[nearest_rank_index(p, n)] for p in (low_pct, mode_pct, high_pct))
    return CalibratedEstimate(lo, ml, hi, unit).check()


def compose_secondary_loss(parts: Sequence[CalibratedEstimate]) -> CalibratedEstimate:
    """Element-wise mean of sub-assessment estimates (e.g. a Pd-VaR and an F-VaR)."""
    if not parts:
        raise EstimateError("nothing to compose")
    units = {p.unit for p in parts}
    if len(units) > 1:
        raise EstimateError(f"unit mismatch: {sorted(units)}")
    for i, p in enumerate(parts):
        p.check(f"parts[{i}]")
    n = len(parts)
    return CalibratedEstimate(
        math.fsum(p.min for p in parts) / n,
        math.fsum(p.most_likely for p in parts) / n,
        math.fsum(p.max for p in parts) / n,
        units.pop(),
    )


def _est(lo, ml, hi, unit: Unit = "currency") -> CalibratedEstimate:
    return CalibratedEstimate(float(lo), float(ml), float(hi), unit)


# Fairness vulnerability calibration for the hiring example.
NATIONALITY_VULNERABILITY = {
    "Americans": _est(0.20, 0.40, 0.60, "probability"),
    "non-Americans": _est(0.50, 0.70, 0.90, "probability"),
}

# Percentile calibrations of the ten historical fines (10th/50th/90th, nearest rank).
_FINES_PRODUCTIVITY = _est(20000, 30000, 45000)
_FINES_ADMIN = _est(4000, 8500, 11000)


def _templates() -> dict[str, Scenario]:
    table3 = Scenario(
        name="data-poisoning-biased-ranking",
        perspective="AI deployer",
        dimensions=tuple(DIMENSIONS),
        tef=_est(1, 5, 10, "rate"),
        vulnerability=VulnerabilityNode(
            tcap=_est(0.20, 0.50, 0.80, "probability"),
            rs=_est(0.10, 0.20, 0.30, "probability"),
        ),
        primary_loss=_est(1000, 4000, 8000),
        secondary_loss_frequency=_est(0.60, 0.80, 1.00, "probability"),
        secondary_loss_magnitude=_est(4000, 8000, 14000),
        notes="Reference inputs: productivity as primary loss, fines and judgments as secondary loss.",
    )
    reconstructed = "Node set reconstructed from prose; values other than those noted are illustrative."
    return {
        "data-poisoning-biased-ranking": table3,
        "administrative-fines": Scenario(
            name="administrative-fines",
            perspective="AI deployer",
            dimensions=("data-protection",),
            tef=_est(1, 5, 10, "rate"),
            vulnerability=VulnerabilityNode(direct=_est(0.10, 0.30, 0.50, "probability")),
            primary_loss=_FINES_PRODUCTIVITY,
            secondary_loss_frequency=_est(0.60, 0.80, 1.00, "probability"),
            secondary_loss_magnitude=_FINES_ADMIN,
            notes=reconstructed + " Loss estimates are percentile calibrations of the ten-fine history.",
        ),
        "biased-ranking-user": Scenario(
            name="biased-ranking-user",
            perspective="AI user",
            dimensions=("fairness",),
            tef=_est(1, 5, 10, "rate"),
            vulnerability=VulnerabilityNode(direct=NATIONALITY_VULNERABILITY["non-Americans"]),
            primary_loss=_est(1000, 4000, 8000),
            secondary_loss_frequency=_est(0.0, 0.0, 0.0, "probability"),
            secondary_loss_magnitude=_est(0, 0, 0),
            notes=reconstructed + " Vulnerability is the non-American calibration.",
        ),
        "fairness-compliance": Scenario(
            name="fairness-compliance",
            perspective="AI deployer",
            dimensions=("fairness",),
            tef=_est(1, 5, 10, "rate"),
            vulnerability=VulnerabilityNode(direct=NATIONALITY_VULNERABILITY["non-Americans"]),
            primary_loss=_est(1000, 4000, 8000),
            secondary_loss_frequency=_est(0.60, 0.80, 1.00, "probability"),
            secondary_loss_magnitude=_est(4000, 8000, 14000),
            notes=reconstructed + " Secondary loss stands for the F-VaR calibration.",
        ),
    }


TEMPLATES = _templates()
TEMPLATE_ALIASES = {"table3": "data-poisoning-biased-ranking"}


def get_template(name: str) -> Scenario:
    key = TEMPLATE_ALIASES.get(name, name)
    try:
        return TEMPLATES[key]
    except KeyError:
        known = sorted(set(TEMPLATES) | set(TEMPLATE_ALIASES))
        raise ScenarioError([Violation("template", f"one of {known}", name)]) from None
