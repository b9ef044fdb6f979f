"""Confusion-matrix evaluation for imbalanced binary classification.

The positive class (label 1) is the minority class.  AUC here is the
arithmetic mean of sensitivity and specificity computed from hard labels
(balanced accuracy), not a ranking/ROC area.  Any metric whose denominator
is zero evaluates to 0, the pessimistic convention for imbalanced data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

METRIC_NAMES = ("precision", "sensitivity", "specificity", "g_mean", "auc",
                "f_measure", "accuracy")

# Column order used for plain-text report tables.
TABLE_COLUMNS = (("AUC", "auc"), ("F-measure", "f_measure"),
                 ("G-mean", "g_mean"), ("Accuracy", "accuracy"))


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self):
        cells = (self.tp, self.fp, self.tn, self.fn)
        if any(int(v) != v or v < 0 for v in cells):
            raise ValueError("confusion counts must be non-negative integers")
        if sum(cells) < 1:
            raise ValueError("confusion matrix must cover at least one row")

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn


@dataclass(frozen=True)
class MetricsReport:
    precision: float
    sensitivity: float
    specificity: float
    g_mean: float
    auc: float
    f_measure: float
    accuracy: float

    def __post_init__(self):
        for name in METRIC_NAMES:
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v}")

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in METRIC_NAMES}

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsReport":
        return cls(**{name: float(d[name]) for name in METRIC_NAMES})


def confusion(predicted, actual) -> ConfusionMatrix:
    """Count prediction outcomes against ground truth (both 0/1 vectors)."""
    pred = np.asarray(predicted)
    act = np.asarray(actual)
    if pred.shape != act.shape or pred.ndim != 1:
        raise ValueError("predicted and actual must be equal-length vectors")
    if pred.size == 0:
        raise ValueError("cannot evaluate an empty prediction vector")
    if not (np.isin(pred, (0, 1)).all() and np.isin(act, (0, 1)).all()):
        raise ValueError("labels must be 0 or 1")
    return ConfusionMatrix(
        tp=int(((pred == 1) & (act == 1)).sum()),
        fp=int(((pred == 1) & (act == 0)).sum()),
        tn=int(((pred == 0) & (act == 0)).sum()),
        fn=int(((pred == 0) & (act == 1)).sum()),
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den > 0 else 0.0


def report(cm: ConfusionMatrix) -> MetricsReport:
    """Derive all scores from a confusion matrix (zero denominators give 0)."""
    precision = _ratio(cm.tp, cm.tp + cm.fp)
    sensitivity = _ratio(cm.tp, cm.tp + cm.fn)
    specificity = _ratio(cm.tn, cm.fp + cm.tn)
    g_mean = math.sqrt(sensitivity * specificity)
    auc = (sensitivity + specificity) / 2.0
    f_den = precision + sensitivity
    f_measure = 2.0 * precision * sensitivity / f_den if f_den > 0 else 0.0
    accuracy = (cm.tp + cm.tn) / cm.total
    return MetricsReport(precision, sensitivity, specificity, g_mean, auc,
                         f_measure, accuracy)


def zero_denominator_metrics(cm: ConfusionMatrix) -> tuple[str, ...]:
    """Names of metrics forced to 0 by an empty denominator, for flagging."""
    flagged = []
    if cm.tp + cm.fp == 0:
        flagged.append("precision")
    if cm.tp + cm.fn == 0:
        flagged.append("sensitivity")
    if cm.fp + cm.tn == 0:
        flagged.append("specificity")
    if _ratio(cm.tp, cm.tp + cm.fp) + _ratio(cm.tp, cm.tp + cm.fn) == 0:
        flagged.append("f_measure")
    return tuple(flagged)


def mean_report(reports) -> MetricsReport:
    """Element-wise arithmetic mean of several reports.

    Derived-metric identities are not re-imposed: the averaged g_mean is the
    mean of per-split g_means, not a recomputation.
    """
    reports = list(reports)
    if not reports:
        raise ValueError("cannot average an empty list of reports")
    return MetricsReport(**{
        name: sum(getattr(r, name) for r in reports) / len(reports)
        for name in METRIC_NAMES
    })


def format_table(named_reports) -> str:
    """Aligned plain-text table with AUC, F-measure, G-mean, Accuracy columns."""
    named_reports = list(named_reports)
    name_width = max([len("Classifier")] + [len(name) for name, _ in named_reports])
    header = "Classifier".ljust(name_width) + "".join(
        f"{label:>11}" for label, _ in TABLE_COLUMNS
    )
    lines = [header]
    for name, rep in named_reports:
        lines.append(name.ljust(name_width) + "".join(
            f"{getattr(rep, attr):>11.3f}" for _, attr in TABLE_COLUMNS
        ))
    return "\n".join(lines)
