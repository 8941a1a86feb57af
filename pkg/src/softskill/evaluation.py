"""Metrics, precision-constrained threshold calibration and the skill filtering report.

The positive class is "the phrase describes the candidate". A score ``s`` is
predicted positive at threshold ``t`` iff ``s >= t``.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import InputError


@dataclass(frozen=True)
class Confusion:
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    def __post_init__(self):
        if min(self.tp, self.fp, self.tn, self.fn) < 0:
            raise InputError("confusion counts must be non-negative")

    @property
    def total(self):
        return self.tp + self.fp + self.tn + self.fn

    @property
    def precision(self):
        return self.tp / (self.tp + self.fp) if self.tp + self.fp else 0.0

    @property
    def recall(self):
        return self.tp / (self.tp + self.fn) if self.tp + self.fn else 0.0


def confusion_from_predictions(labels, predictions):
    labels = np.asarray(labels).astype(bool)
    predictions = np.asarray(predictions).astype(bool)
    return Confusion(
        tp=int(np.sum(labels & predictions)),
        fp=int(np.sum(~labels & predictions)),
        tn=int(np.sum(~labels & ~predictions)),
        fn=int(np.sum(labels & ~predictions)),
    )


def _f1(hits, predicted, actual):
    if predicted == 0 or actual == 0 or hits == 0:
        return 0.0
    p = hits / predicted
    r = hits / actual
    return 2 * p * r / (p + r)


def f1_weighted(confusion):
    """Per-class F1 averaged with weights proportional to class support."""
    c = confusion
    n = c.total
    if n == 0:
        raise InputError("f1_weighted of an empty confusion matrix")
    pos_support = c.tp + c.fn
    neg_support = c.tn + c.fp
    f1_pos = _f1(c.tp, c.tp + c.fp, pos_support)
    f1_neg = _f1(c.tn, c.tn + c.fn, neg_support)
    return (pos_support * f1_pos + neg_support * f1_neg) / n


@dataclass(frozen=True)
class Calibration:
    threshold: float
    precision: float
    recall: float
    target_precision: float
    target_unattained: bool


def candidate_thresholds(scores):
    """0, 1 and the midpoints between consecutive distinct sorted scores."""
    u = np.unique(np.asarray(scores, dtype=np.float64))
    mids = (u[:-1] + u[1:]) / 2.0
    return np.unique(np.concatenate([[0.0], mids, [1.0]]))


def precision_recall_curve(scores, labels, thresholds):
    """Counts of true and false positives at each threshold (predict ``score >= t``)."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    order = np.argsort(scores, kind="stable")
    s_sorted = scores[order]
    pos_sorted = labels[order]
    # number of positives/negatives with score < t, via searchsorted
    cum_pos = np.concatenate([[0], np.cumsum(pos_sorted)])
    cum_neg = np.concatenate([[0], np.cumsum(~pos_sorted)])
    below = np.searchsorted(s_sorted, thresholds, side="left")
    tp = cum_pos[-1] - cum_pos[below]
    fp = cum_neg[-1] - cum_neg[below]
    return tp, fp


def calibrate_threshold(scores, labels, target_precision=0.95):
    """Pick the threshold with maximal recall among those reaching ``target_precision``.

    Ties on recall go to the lower threshold. If no threshold reaches the
    target, the threshold with the highest precision (lowest on ties) is
    returned with ``target_unattained`` set. Precision is undefined, and never
    counts as attaining the target, when nothing is predicted positive.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels).astype(bool)
    if scores.size == 0 or scores.shape != labels.shape:
        raise InputError("scores and labels must be non-empty and of equal length")
    if not 0.0 < target_precision <= 1.0:
        raise InputError("target_precision must lie in (0, 1]")
    thresholds = candidate_thresholds(scores)
    tp, fp = precision_recall_curve(scores, labels, thresholds)
    n_pos = int(labels.sum())
    predicted = tp + fp
    with np.errstate(divide="ignore", invalid="ignore"):
        precision = np.where(predicted > 0, tp / np.maximum(predicted, 1), 0.0)
    recall = tp / n_pos if n_pos else np.zeros_like(precision)
    ok = (predicted > 0) & (precision >= target_precision)
    if ok.any():
        # thresholds are ascending, so argmax picks the lowest among ties
        masked = np.where(ok, recall, -1.0)
        k = int(np.argmax(masked))
        unattained = False
    else:
        k = int(np.argmax(precision))
        unattained = True
    return Calibration(float(thresholds[k]), float(precision[k]), float(recall[k]),
                       float(target_precision), unattained)


def naive_baseline(labels):
    """Accept every match: precision is the positive fraction, recall is 1."""
    labels = np.asarray(labels).astype(bool)
    if labels.size == 0:
        raise InputError("naive_baseline needs at least one label")
    return float(labels.mean()), 1.0


@dataclass(frozen=True)
class EvalReport:
    precision: float
    recall: float
    f1_weighted: float
    threshold: float
    confusion: Confusion
    naive_precision: float
    target_precision: float = 0.95
    target_unattained: bool = False

    def as_dict(self):
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1_weighted": self.f1_weighted,
            "threshold": self.threshold,
            "target_precision": self.target_precision,
            "target_unattained": self.target_unattained,
            "naive_precision": self.naive_precision,
            "tp": self.confusion.tp, "fp": self.confusion.fp,
            "tn": self.confusion.tn, "fn": self.confusion.fn,
        }

    def as_lines(self):
        pct = lambda v: f"{100 * v:.2f}%"
        return [
            f"precision: {pct(self.precision)}",
            f"recall: {pct(self.recall)}",
            f"f1_weighted: {pct(self.f1_weighted)}",
            f"threshold: {self.threshold:.6f}",
            f"target_precision: {pct(self.target_precision)}",
            f"target_unattained: {str(self.target_unattained).lower()}",
            f"naive_precision: {pct(self.naive_precision)}",
            f"confusion: tp={self.confusion.tp} fp={self.confusion.fp} "
            f"tn={self.confusion.tn} fn={self.confusion.fn}",
        ]


def evaluate_scores(scores, labels, target_precision=0.95, threshold=None):
    """Build an :class:`EvalReport`, calibrating the threshold unless one is given."""
    labels = np.asarray(labels).astype(bool)
    unattained = False
    if threshold is None:
        cal = calibrate_threshold(scores, labels, target_precision)
        threshold, unattained = cal.threshold, cal.target_unattained
    preds = np.asarray(scores) >= threshold
    conf = confusion_from_predictions(labels, preds)
    return EvalReport(
        precision=conf.precision,
        recall=conf.recall,
        f1_weighted=f1_weighted(conf),
        threshold=float(threshold),
        confusion=conf,
        naive_precision=naive_baseline(labels)[0],
        target_precision=float(target_precision),
        target_unattained=unattained,
    )


@dataclass(frozen=True)
class SkillCount:
    skill_id: int
    raw_count: int
    filtered_count: int

    @property
    def removed(self):
        return self.raw_count - self.filtered_count


def filter_counts(skill_ids, scores, threshold):
    """Per-skill raw and kept counts, largest removal first (ties by skill id)."""
    raw = Counter(skill_ids)
    kept = Counter(sid for sid, s in zip(skill_ids, scores) if s >= threshold)
    rows = [SkillCount(sid, raw[sid], kept.get(sid, 0)) for sid in raw]
    rows.sort(key=lambda r: (-r.removed, r.skill_id))
    return rows


def filter_report(snippets, model, threshold, embeddings=None):
    """Score each snippet with ``model`` and count matches kept per skill."""
    from .model import predict_proba
    from .represent import represent

    inputs = [represent(s, model.mode, embeddings) for s in snippets]
    scores = predict_proba(model, inputs) if inputs else []
    return filter_counts([s.skill_id for s in snippets], scores, threshold)
