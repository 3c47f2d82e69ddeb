"""Binary classification and regression metrics over externally produced predictions.

Undefined metrics (zero denominators) raise UndefinedMetricError instead of
returning 0, since a silent zero hides which error type dominates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import AivarError, UndefinedMetricError


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self):
        for name in ("tp", "tn", "fp", "fn"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise AivarError(f"{name} must be a non-negative count, got {v!r}")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_array(self) -> np.ndarray:
        """Rows = actual (0, 1), columns = predicted (0, 1)."""
        return np.array([[self.tn, self.fp], [self.fn, self.tp]])

    def to_dict(self) -> dict:
        return {"tp": int(self.tp), "tn": int(self.tn), "fp": int(self.fp), "fn": int(self.fn)}


def confusion_matrix(labels: Sequence[int], predictions: Sequence[int]) -> ConfusionMatrix:
    if len(labels) != len(predictions):
        raise AivarError(f"length mismatch: labels has {len(labels)}, predictions has {len(predictions)}")
    if len(labels) == 0:
        raise AivarError("empty label/prediction lists")
    y = np.asarray(labels)
    p = np.asarray(predictions)
    for name, arr in (("labels", y), ("predictions", p)):
        bad = ~np.isin(arr, (0, 1))
        if bad.any():
            raise AivarError(f"{name} must be binary (0/1), found {arr[bad][0]!r}")
    y = y.astype(bool)
    p = p.astype(bool)
    return ConfusionMatrix(
        tp=int(np.sum(y & p)),
        tn=int(np.sum(~y & ~p)),
        fp=int(np.sum(~y & p)),
        fn=int(np.sum(y & ~p)),
    )


def _ratio(num: int, den: int, what: str) -> float:
    if den == 0:
        raise UndefinedMetricError(f"{what} undefined: zero denominator")
    return num / den


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp + cm.tn, cm.total, "accuracy")


def precision(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fp, "precision (no positive predictions)")


def recall(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fn, "recall (no positive labels)")


def classification_summary(cm: ConfusionMatrix) -> dict:
    """Every metric the matrix supports; undefined ones are reported as null with the reason."""
    out: dict = {"confusion_matrix": cm.to_dict()}
    undefined = {}
    for name, fn in (("accuracy", accuracy), ("precision", precision), ("recall", recall)):
        try:
            out[name] = fn(cm)
        except UndefinedMetricError as exc:
            out[name] = None
            undefined[name] = str(exc)
    if undefined:
        out["undefined"] = undefined
    return out


def _errors(actual: Sequence[float], predicted: Sequence[float]) -> np.ndarray:
    a = np.asarray(actual, dtype=float)
    p = np.asarray(predicted, dtype=float)
    if a.shape != p.shape:
        raise AivarError(f"length mismatch: actual has {a.size}, predicted has {p.size}")
    if a.size == 0:
        raise AivarError("no prediction pairs")
    if not (np.isfinite(a).all() and np.isfinite(p).all()):
        raise AivarError("prediction pairs must be finite")
    return a - p


def rmse(actual: Sequence[float], predicted: Sequence[float]) -> float:
    e = _errors(actual, predicted)
    scale = float(np.max(np.abs(e)))
    if scale == 0.0:
        return 0.0
    # scaling keeps tiny or huge errors from under/overflowing when squared
    r = e / scale
    return scale * math.sqrt(math.fsum(r * r) / e.size)


def mae(actual: Sequence[float], predicted: Sequence[float]) -> float:
    e = _errors(actual, predicted)
    return math.fsum(np.abs(e)) / e.size


def regression_summary(actual: Sequence[float], predicted: Sequence[float]) -> dict:
    e = _errors(actual, predicted)
    return {"n": int(e.size), "rmse": rmse(actual, predicted), "mae": mae(actual, predicted)}
