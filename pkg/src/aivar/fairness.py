"""Pairwise group-fairness metrics and group-keyed vulnerability calibration."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Literal, Mapping, Sequence

from .errors import AivarError, DatasetError, UndefinedMetricError, UnknownGroupError
from .risk_model import NATIONALITY_VULNERABILITY, CalibratedEstimate
from .tabular import Dataset


@dataclass(frozen=True)
class OutcomeRule:
    """How a row's favorable outcome is read.

    ``score-threshold``: favorable iff ``score_column >= threshold``.
    ``explicit-binary-column``: favorable iff ``outcome_column == 1``.
    """

    mode: Literal["score-threshold", "explicit-binary-column"] = "score-threshold"
    score_column: str | None = None
    threshold: float | None = None
    outcome_column: str | None = None

    @classmethod
    def score(cls, column: str, threshold: float) -> "OutcomeRule":
        return cls("score-threshold", score_column=column, threshold=threshold)

    @classmethod
    def binary(cls, column: str) -> "OutcomeRule":
        return cls("explicit-binary-column", outcome_column=column)

    def outcomes(self, d: Dataset) -> list[int]:
        if self.mode == "score-threshold":
            if self.threshold is None or not math.isfinite(self.threshold):
                raise AivarError(f"threshold must be finite, got {self.threshold!r}")
            col = self.score_column
            if d.kind(col) != "numeric":
                raise DatasetError(f"score column {col!r} is not numeric")
            return [int(v >= self.threshold) for v in d.column(col)]
        if self.mode == "explicit-binary-column":
            vals = d.column(self.outcome_column)
            bad = [v for v in vals if v not in (0, 1)]
            if bad:
                raise DatasetError(f"outcome column {self.outcome_column!r} is not binary: {bad[0]!r}")
            return [int(v) for v in vals]
        raise AivarError(f"unknown outcome rule mode {self.mode!r}")


@dataclass(frozen=True)
class GroupSpec:
    group_column: str
    unprivileged: Any
    privileged: Any

    def swapped(self) -> "GroupSpec":
        return GroupSpec(self.group_column, self.privileged, self.unprivileged)


@dataclass(frozen=True)
class BinaryOutcomes:
    favorable: int
    total: int

    @property
    def rate(self) -> float:
        if self.total == 0:
            raise UndefinedMetricError("favorable rate undefined for an empty group")
        return self.favorable / self.total


def _members(d: Dataset, g: GroupSpec, which: Any) -> list[bool]:
    value = d.coerce(g.group_column, which)
    return [v == value for v in d.column(g.group_column)]


def group_outcomes(d: Dataset, rule: OutcomeRule, g: GroupSpec, which: Any) -> BinaryOutcomes:
    mask = _members(d, g, which)
    fav = rule.outcomes(d)
    return BinaryOutcomes(sum(f for f, m in zip(fav, mask) if m), sum(mask))


def favorable_rate(d: Dataset, rule: OutcomeRule, g: GroupSpec, which: Any) -> float:
    tally = group_outcomes(d, rule, g, which)
    if tally.total == 0:
        raise UndefinedMetricError(f"group {g.group_column}={which!r} is empty; favorable rate undefined")
    return tally.rate


def statistical_parity_difference(d: Dataset, rule: OutcomeRule, g: GroupSpec) -> float:
    """Favorable rate of the unprivileged group minus that of the privileged group."""
    return favorable_rate(d, rule, g, g.unprivileged) - favorable_rate(d, rule, g, g.privileged)


demographic_parity_difference = statistical_parity_difference


def _rates(labels, preds, name) -> tuple[float, float]:
    pos = [p for y, p in zip(labels, preds) if y == 1]
    neg = [p for y, p in zip(labels, preds) if y == 0]
    if not pos:
        raise UndefinedMetricError(f"group {name!r} has no positive labels; TPR undefined")
    if not neg:
        raise UndefinedMetricError(f"group {name!r} has no negative labels; FPR undefined")
    return sum(pos) / len(pos), sum(neg) / len(neg)


def average_odds_difference(
    labels: Sequence[int], predictions: Sequence[int], groups: Sequence[Any], g: GroupSpec
) -> float:
    """Mean of the FPR gap and the TPR gap, unprivileged minus privileged."""
    if not len(labels) == len(predictions) == len(groups):
        raise AivarError(
            f"length mismatch: labels={len(labels)}, predictions={len(predictions)}, groups={len(groups)}"
        )
    for name, seq in (("labels", labels), ("predictions", predictions)):
        bad = [v for v in seq if v not in (0, 1)]
        if bad:
            raise AivarError(f"{name} must be binary, found {bad[0]!r}")

    def split(value):
        sel = [i for i, v in enumerate(groups) if v == value]
        return [labels[i] for i in sel], [predictions[i] for i in sel]

    tpr_u, fpr_u = _rates(*split(g.unprivileged), g.unprivileged)
    tpr_p, fpr_p = _rates(*split(g.privileged), g.privileged)
    return 0.5 * ((fpr_u - fpr_p) + (tpr_u - tpr_p))


def average_odds_difference_from(
    d: Dataset, label_column: str, pred_column: str, g: GroupSpec
) -> float:
    groups = d.column(g.group_column)
    spec = GroupSpec(
        g.group_column,
        d.coerce(g.group_column, g.unprivileged),
        d.coerce(g.group_column, g.privileged),
    )
    return average_odds_difference(d.column(label_column), d.column(pred_column), groups, spec)


GroupCalibrationMap = Mapping[Any, CalibratedEstimate]


def calibration_map(entries: Mapping[Any, CalibratedEstimate]) -> dict[Any, CalibratedEstimate]:
    out = {}
    for key, est in entries.items():
        if est.unit != "probability":
            raise AivarError(f"group {key!r}: vulnerability must be a probability estimate")
        out[key] = est.check(f"group {key!r}")
    return out


NATIONALITY_MAP = calibration_map(NATIONALITY_VULNERABILITY)


def vulnerability_for_group(m: GroupCalibrationMap, group: Any) -> CalibratedEstimate:
    try:
        return m[group]
    except KeyError:
        raise UnknownGroupError(f"no vulnerability calibration for group {group!r}") from None
