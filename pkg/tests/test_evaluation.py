from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sklearn.metrics import f1_score

from softskill.errors import InputError
from softskill.evaluation import (Confusion, calibrate_threshold, candidate_thresholds,
                                  evaluate_scores, f1_weighted, filter_counts, naive_baseline)


def sklearn_f1w(c):
    y_true = [1] * c.tp + [0] * c.fp + [0] * c.tn + [1] * c.fn
    y_pred = [1] * c.tp + [1] * c.fp + [0] * c.tn + [0] * c.fn
    return f1_score(y_true, y_pred, average="weighted", labels=[0, 1], zero_division=0)


def test_f1_perfect():
    assert f1_weighted(Confusion(tp=50, fn=0, fp=0, tn=50)) == 1.0


def test_f1_worked_example():
    # F1 per class = 2tp / (2tp + fp + fn)
    f_pos = Fraction(2 * 8, 2 * 8 + 1 + 2)
    f_neg = Fraction(2 * 9, 2 * 9 + 2 + 1)
    expected = float((f_pos * 10 + f_neg * 10) / 20)
    got = f1_weighted(Confusion(tp=8, fn=2, fp=1, tn=9))
    assert got == pytest.approx(expected, abs=1e-15)
    assert got == pytest.approx(0.8496, abs=5e-5)


def test_f1_zero_support_class():
    assert f1_weighted(Confusion(tp=10)) == 1.0


def test_f1_empty():
    with pytest.raises(InputError):
        f1_weighted(Confusion())


counts = st.integers(0, 60)


@given(counts, counts, counts, counts)
def test_f1_matches_sklearn(tp, fp, tn, fn):
    c = Confusion(tp, fp, tn, fn)
    if c.total == 0:
        return
    assert f1_weighted(c) == pytest.approx(sklearn_f1w(c), abs=1e-9)


@given(counts, counts, counts, counts)
def test_f1_class_swap_invariance(tp, fp, tn, fn):
    if tp + fp + tn + fn == 0:
        return
    assert f1_weighted(Confusion(tp, fp, tn, fn)) == pytest.approx(f1_weighted(Confusion(tn, fn, tp, fp)), abs=1e-12)


def sweep_oracle(scores, labels, target):
    """Evaluate every candidate threshold directly and apply the selection rule."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    best = None
    fallback = None
    for t in candidate_thresholds(scores):
        pred = scores >= t
        tp = int(np.sum(pred & labels))
        fp = int(np.sum(pred & ~labels))
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / labels.sum() if labels.sum() else 0.0
        if tp + fp and prec >= target and (best is None or rec > best[2]):
            best = (t, prec, rec)
        if fallback is None or prec > fallback[1]:
            fallback = (t, prec, rec)
    return (best, False) if best is not None else (fallback, True)


def test_calibrate_worked_example():
    cal = calibrate_threshold([0.9, 0.8, 0.7, 0.6], [1, 1, 0, 1], 1.0)
    assert cal.threshold == pytest.approx(0.75)
    assert cal.precision == 1.0
    assert cal.recall == pytest.approx(2 / 3)
    assert not cal.target_unattained


def test_calibrate_all_positive():
    cal = calibrate_threshold([0.3, 0.1, 0.8], [1, 1, 1], 0.95)
    assert cal.threshold == 0.0 and cal.recall == 1.0


def test_calibrate_all_negative():
    assert calibrate_threshold([0.3, 0.1, 0.8], [0, 0, 0], 0.95).target_unattained


def test_calibrate_rejects_empty():
    with pytest.raises(InputError):
        calibrate_threshold([], [], 0.9)


@settings(max_examples=200)
@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=60),
       st.sampled_from([0.5, 0.8, 0.9, 0.95, 1.0]))
def test_calibrate_matches_oracle(pairs, target):
    scores, labels = zip(*pairs)
    cal = calibrate_threshold(scores, labels, target)
    (t, p, r), unattained = sweep_oracle(scores, labels, target)
    assert (cal.threshold, cal.precision, cal.recall, cal.target_unattained) == (t, p, r, unattained)


@given(st.lists(st.tuples(st.floats(0, 1), st.booleans()), min_size=1, max_size=40))
def test_recall_monotone_in_threshold(pairs):
    scores, labels = map(np.asarray, zip(*pairs))
    recalls = [np.sum((scores >= t) & labels) for t in candidate_thresholds(scores)]
    assert all(a >= b for a, b in zip(recalls, recalls[1:]))


def test_naive_baseline():
    labels = [1] * 1984 + [0] * 222
    p, r = naive_baseline(labels)
    assert p == pytest.approx(1984 / 2206) and r == 1.0
    assert p == pytest.approx(0.8994, abs=1e-4)
    assert naive_baseline([1, 1]) == (1.0, 1.0)
    assert naive_baseline([1, 0]) == (0.5, 1.0)


def test_evaluate_scores_report():
    rep = evaluate_scores([0.9, 0.8, 0.7, 0.6], [1, 1, 0, 1], target_precision=1.0)
    assert rep.threshold == pytest.approx(0.75)
    assert (rep.confusion.tp, rep.confusion.fp, rep.confusion.tn, rep.confusion.fn) == (2, 0, 1, 1)
    assert rep.naive_precision == 0.75
    assert any(line.startswith("recall: 66.67%") for line in rep.as_lines())


def test_filter_counts_extremes():
    ids = [3, 3, 1, 2, 3]
    all_pos = filter_counts(ids, [1.0] * 5, 0.5)
    assert all(r.filtered_count == r.raw_count for r in all_pos)
    all_neg = filter_counts(ids, [0.0] * 5, 0.5)
    assert all(r.filtered_count == 0 for r in all_neg)
    assert [r.skill_id for r in all_neg] == [3, 1, 2]


@given(st.lists(st.tuples(st.integers(0, 6), st.floats(0, 1)), max_size=80), st.floats(0, 1))
def test_filter_counts_recount(pairs, threshold):
    ids = [i for i, _ in pairs]
    scores = [s for _, s in pairs]
    rows = filter_counts(ids, scores, threshold)
    for r in rows:
        assert r.raw_count == sum(1 for i in ids if i == r.skill_id)
        assert r.filtered_count == sum(1 for i, s in pairs if i == r.skill_id and s >= threshold)
        assert 0 <= r.filtered_count <= r.raw_count
    removed = [r.removed for r in rows]
    assert removed == sorted(removed, reverse=True)
