"""Confusion matrices, per-class precision/recall/F1, and one-vs-rest ROC.

Macro-F1 is the unweighted mean of per-class F1 over all K classes.  Any
metric whose denominator is zero is defined as 0, so classes without
support drag macro-F1 down rather than being ignored.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np


@dataclass
class ConfusionMatrix:
    """K x K counts with rows = true class, columns = predicted class."""

    counts: np.ndarray
    classes: list[str]

    @property
    def n_classes(self) -> int:
        return self.counts.shape[0]

    def support(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class MetricsReport:
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    macro_f1: float
    micro_f1: float
    accuracy: float
    classes: list[str] = field(default_factory=list)


def confusion(
    y_true: Sequence[int], y_pred: Sequence[int], n_classes: int, classes: list[str] | None = None
) -> ConfusionMatrix:
    """Count (true, predicted) label pairs into a K x K matrix."""
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("y_true and y_pred lengths differ")
    counts = np.zeros((n_classes, n_classes), dtype=np.int64)
    if y_true.size:
        if y_true.min() < 0 or y_true.max() >= n_classes or y_pred.min() < 0 or y_pred.max() >= n_classes:
            raise ValueError(f"labels out of range [0, {n_classes})")
        np.add.at(counts, (y_true, y_pred), 1)
    if classes is None:
        classes = [str(i) for i in range(n_classes)]
    return ConfusionMatrix(counts=counts, classes=list(classes))


def metrics(cm: ConfusionMatrix) -> MetricsReport:
    """Per-class precision/recall/F1 plus macro-F1, micro-F1, accuracy.

    precision_i = TP_i / (TP_i + FP_i), recall_i = TP_i / (TP_i + FN_i),
    F_i = 2 p r / (p + r), macro-F1 = mean over all K classes.  Micro-F1
    pools TP/FP/FN across classes, which for single-label multiclass
    equals accuracy.
    """
    counts = cm.counts.astype(np.float64)
    tp = np.diag(counts)
    fp = counts.sum(axis=0) - tp
    fn = counts.sum(axis=1) - tp
    precision = _safe_div(tp, tp + fp)
    recall = _safe_div(tp, tp + fn)
    f1 = _safe_div(2.0 * precision * recall, precision + recall)
    macro_f1 = float(f1.mean()) if f1.size else 0.0
    pooled_tp = tp.sum()
    micro_p = _scalar_div(pooled_tp, pooled_tp + fp.sum())
    micro_r = _scalar_div(pooled_tp, pooled_tp + fn.sum())
    micro_f1 = _scalar_div(2.0 * micro_p * micro_r, micro_p + micro_r)
    total = counts.sum()
    accuracy = _scalar_div(pooled_tp, total)
    return MetricsReport(
        precision=precision,
        recall=recall,
        f1=f1,
        support=cm.support(),
        macro_f1=macro_f1,
        micro_f1=micro_f1,
        accuracy=accuracy,
        classes=list(cm.classes),
    )


def _safe_div(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num, dtype=np.float64)
    nz = den != 0
    out[nz] = num[nz] / den[nz]
    return out


def _scalar_div(num: float, den: float) -> float:
    return float(num / den) if den != 0 else 0.0


@dataclass
class RocCurve:
    """Threshold sweep points from (0,0) to (1,1) plus trapezoidal AUC."""

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float


def roc_curve(scores: Sequence[float], positives: Sequence[bool]) -> RocCurve:
    """One-vs-rest ROC via descending threshold sweep.

    Samples with equal scores enter as a single threshold step, which
    makes the trapezoidal AUC equal the Mann-Whitney statistic.
    """
    scores = np.asarray(scores, dtype=np.float64)
    positives = np.asarray(positives, dtype=bool)
    if scores.shape != positives.shape:
        raise ValueError("scores and positives lengths differ")
    n_pos = int(positives.sum())
    n_neg = int((~positives).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs at least one positive and one negative sample")
    order = np.argsort(-scores, kind="stable")
    s_sorted = scores[order]
    p_sorted = positives[order]
    tp_cum = np.cumsum(p_sorted)
    fp_cum = np.cumsum(~p_sorted)
    # last index of each group of equal scores
    distinct = np.flatnonzero(np.diff(s_sorted) != 0)
    last = np.concatenate([distinct, [scores.size - 1]])
    thresholds = np.concatenate([[np.inf], s_sorted[last]])
    tpr = np.concatenate([[0.0], tp_cum[last] / n_pos])
    fpr = np.concatenate([[0.0], fp_cum[last] / n_neg])
    auc = float(np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2.0))
    return RocCurve(thresholds=thresholds, fpr=fpr, tpr=tpr, auc=auc)


@dataclass
class OvrRocResult:
    curves: dict[str, RocCurve]
    omitted: list[str] = field(default_factory=list)


def ovr_roc(proba: np.ndarray, y_true: Sequence[int], classes: list[str] | None = None) -> OvrRocResult:
    """Per-class one-vs-rest ROC using probability column k as the score.

    Classes with no positive (or no negative) samples are omitted and
    listed in the result.
    """
    proba = np.asarray(proba, dtype=np.float64)
    y_true = np.asarray(y_true, dtype=np.int64)
    n_classes = proba.shape[1]
    sums = proba.sum(axis=1)
    if proba.size and not np.allclose(sums, 1.0, atol=1e-6):
        raise ValueError("probability rows must sum to 1 within 1e-6")
    if classes is None:
        classes = [str(i) for i in range(n_classes)]
    result = OvrRocResult(curves={})
    for k in range(n_classes):
        pos = y_true == k
        if pos.all() or not pos.any():
            result.omitted.append(classes[k])
            continue
        result.curves[classes[k]] = roc_curve(proba[:, k], pos)
    return result


def write_metrics_json(report: MetricsReport, stream: TextIO) -> None:
    payload = {
        "macro_f1": report.macro_f1,
        "micro_f1": report.micro_f1,
        "accuracy": report.accuracy,
        "per_class": [
            {
                "label": report.classes[i],
                "precision": float(report.precision[i]),
                "recall": float(report.recall[i]),
                "f1": float(report.f1[i]),
                "support": int(report.support[i]),
            }
            for i in range(len(report.classes))
        ],
    }
    json.dump(payload, stream, indent=2, sort_keys=True)
    stream.write("\n")


def write_confusion_csv(cm: ConfusionMatrix, stream: TextIO) -> None:
    """CSV with a header row/column of class names; rows are true classes."""
    writer = csv.writer(stream)
    writer.writerow(["true\\predicted", *cm.classes])
    for i, name in enumerate(cm.classes):
        writer.writerow([name, *cm.counts[i].tolist()])


def write_roc_csv(curve: RocCurve, stream: TextIO) -> None:
    writer = csv.writer(stream)
    writer.writerow(["threshold", "fpr", "tpr"])
    for t, f, r in zip(curve.thresholds, curve.fpr, curve.tpr):
        writer.writerow([repr(float(t)), repr(float(f)), repr(float(r))])
