"""Integrated assessment report: per-dimension findings, simulation summary and AI-VaR."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Any, Mapping

from .errors import AivarError
from .risk_model import DIMENSIONS, Scenario
from .simulation import RNG_CONTRACT, LossDistribution, VarQuery, cvar, summarize, truncated_var

SCHEMA_VERSION = "aivar.report/1"
NOT_ASSESSED = "not assessed"

# which keyword part feeds which dimension
_PART_DIMENSION = {
    "identifiability": "data-protection",
    "fairness": "fairness",
    "performance": "accuracy-robustness",
    "information_security": "information-security",
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": SCHEMA_VERSION,
    "type": "object",
    "required": ["schema", "scenario", "dimensions", "simulation", "var", "provenance"],
    "additionalProperties": False,
    "properties": {
        "schema": {"const": SCHEMA_VERSION},
        "scenario": {
            "type": ["object", "null"],
            "required": ["name", "perspective", "currency", "dimensions"],
        },
        "dimensions": {
            "type": "object",
            "required": list(DIMENSIONS),
            "additionalProperties": False,
            "properties": {
                key: {
                    "type": "object",
                    "required": ["label", "status", "findings"],
                    "properties": {
                        "label": {"type": "string"},
                        "status": {"enum": ["assessed", NOT_ASSESSED]},
                        "findings": {"type": ["object", "null"]},
                    },
                }
                for key in DIMENSIONS
            },
        },
        "simulation": {
            "type": ["object", "null"],
            "required": ["ale", "p10", "p90", "n", "min", "max", "factor_means"],
        },
        "var": {
            "type": ["object", "null"],
            "required": ["query", "value", "cvar"],
        },
        "provenance": {
            "type": "object",
            "required": ["seed", "iterations", "rng", "inputs"],
        },
    },
}


@dataclass(frozen=True)
class AssessmentReport:
    scenario: dict | None
    dimensions: dict
    simulation: dict | None
    var: dict | None
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"schema": SCHEMA_VERSION, **asdict(self)}

    @classmethod
    def from_dict(cls, d: Mapping) -> "AssessmentReport":
        if d.get("schema") != SCHEMA_VERSION:
            raise AivarError(f"unsupported report schema {d.get('schema')!r}")
        return cls(
            scenario=d["scenario"],
            dimensions=d["dimensions"],
            simulation=d["simulation"],
            var=d["var"],
            provenance=d["provenance"],
        )


def file_digest(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _as_findings(part: Any) -> dict:
    if hasattr(part, "to_dict"):
        part = part.to_dict()
    if not isinstance(part, Mapping):
        raise AivarError(f"findings must be a mapping, got {type(part).__name__}")
    # normalise through JSON so the report holds plain, round-trippable values
    return json.loads(json.dumps(part))


def build_report(
    *,
    scenario: Scenario | None = None,
    distribution: LossDistribution | None = None,
    var_query: VarQuery | None = None,
    identifiability: Any = None,
    fairness: Any = None,
    performance: Any = None,
    information_security: Any = None,
    inputs: Mapping[str, str] | None = None,
) -> AssessmentReport:
    parts = {
        "identifiability": identifiability,
        "fairness": fairness,
        "performance": performance,
        "information_security": information_security,
    }
    if distribution is None and all(v is None for v in parts.values()):
        raise AivarError("nothing to report: no simulation and no dimension findings")

    dimensions = {key: {"label": label, "status": NOT_ASSESSED, "findings": None}
                  for key, label in DIMENSIONS.items()}
    for part_name, value in parts.items():
        if value is not None:
            key = _PART_DIMENSION[part_name]
            dimensions[key] = {"label": DIMENSIONS[key], "status": "assessed", "findings": _as_findings(value)}

    simulation = var = None
    if distribution is not None:
        simulation = summarize(distribution).to_dict()
        q = var_query or VarQuery()
        var = {
            "query": q.to_dict(),
            "value": truncated_var(distribution, q),
            "cvar": cvar(distribution, q.confidence),
        }

    scen = None
    if scenario is not None:
        scen = {
            "name": scenario.name,
            "perspective": scenario.perspective,
            "currency": scenario.currency,
            "dimensions": list(scenario.dimensions),
        }
    elif distribution is not None:
        scen = {"name": None, "perspective": None, "currency": distribution.currency, "dimensions": []}

    provenance = {
        "seed": None if distribution is None else distribution.seed,
        "iterations": None if distribution is None else distribution.iterations,
        "rng": RNG_CONTRACT,
        "inputs": dict(sorted((inputs or {}).items())),
    }
    return AssessmentReport(scen, dimensions, simulation, var, provenance)


def round_half_up(x: float) -> int:
    return int(Decimal(repr(float(x))).quantize(Decimal(1), rounding=ROUND_HALF_UP))


_SYMBOLS = {"USD": "$", "EUR": "€", "GBP": "£"}


def money(x: float, currency: str = "USD") -> str:
    """Whole currency units, rounded half-up, thousands separated by a space."""
    n = round_half_up(x)
    digits = f"{abs(n):,}".replace(",", " ")
    sign = "-" if n < 0 else ""
    sym = _SYMBOLS.get(currency)
    return f"{sign}{sym}{digits}" if sym else f"{sign}{digits} {currency}"


def ordinal(pct: float) -> str:
    n = round(pct * 100)
    if 10 <= n % 100 <= 13:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")
    return f"{n}{suffix}"


def _scalar(v: Any) -> str:
    if isinstance(v, float):
        return f"{v:.4f}"
    return str(v)


def _findings_lines(findings: dict) -> list[str]:
    lines = []
    for key in sorted(findings):
        v = findings[key]
        if isinstance(v, (dict, list)):
            if key == "flagged" and isinstance(v, list):
                lines.append(f"flagged: {len(v)}")
            continue
        lines.append(f"{key}: {_scalar(v)}")
    return lines


def render(r: AssessmentReport, format: str = "json") -> str:
    if format in ("json", "structured"):
        return json.dumps(r.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if format not in ("plain", "text"):
        raise AivarError(f"unknown report format {format!r}")

    cur = (r.scenario or {}).get("currency") or "USD"
    out = []
    if r.scenario and r.scenario.get("name"):
        out.append(f"AI risk assessment: {r.scenario['name']} (perspective: {r.scenario['perspective']})")
    else:
        out.append("AI risk assessment")
    out.append("")
    out.append("Dimensions")
    for key in DIMENSIONS:
        dim = r.dimensions[key]
        if dim["status"] == NOT_ASSESSED:
            out.append(f"  {dim['label']}: {NOT_ASSESSED}")
            continue
        out.append(f"  {dim['label']}:")
        out.extend(f"    {line}" for line in _findings_lines(dim["findings"]))
    if r.simulation is not None:
        p = r.provenance
        out.append("")
        out.append(f"Simulation ({p['iterations']} iterations, seed {p['seed']})")
        out.append(f"  ALE: {money(r.simulation['ale'], cur)}")
        out.append(f"  P10: {money(r.simulation['p10'], cur)}")
        out.append(f"  P90: {money(r.simulation['p90'], cur)}")
    if r.var is not None:
        q = r.var["query"]
        out.append("")
        out.append(
            f"AI-VaR: worst annual loss of {money(r.var['value'], cur)}, at the "
            f"{ordinal(q['confidence'])} confidence level within a chosen interval between "
            f"the p{ordinal(q['low_pct'])} and the p{ordinal(q['high_pct'])}."
        )
        out.append(f"CVaR ({ordinal(q['confidence'])}): {money(r.var['cvar'], cur)}")
    return "\n".join(out) + "\n"


def parse_report(text: str) -> AssessmentReport:
    return AssessmentReport.from_dict(json.loads(text))
