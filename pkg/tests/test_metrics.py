import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from railcause.metrics import (
    confusion,
    metrics,
    ovr_roc,
    roc_curve,
    write_confusion_csv,
    write_metrics_json,
    write_roc_csv,
)


def metrics_oracle(y_true, y_pred, k):
    """Brute-force per-class precision/recall/F1 and the averaged scores,
    straight from the defining count ratios."""
    n = len(y_true)
    precision, recall, f1 = [], [], []
    for i in range(k):
        tp = sum(1 for t, p in zip(y_true, y_pred) if t == i and p == i)
        fp = sum(1 for t, p in zip(y_true, y_pred) if t != i and p == i)
        fn = sum(1 for t, p in zip(y_true, y_pred) if t == i and p != i)
        pi = tp / (tp + fp) if tp + fp else 0.0
        rho = tp / (tp + fn) if tp + fn else 0.0
        fi = 2 * pi * rho / (pi + rho) if pi + rho else 0.0
        precision.append(pi)
        recall.append(rho)
        f1.append(fi)
    macro = sum(f1) / k
    correct = sum(1 for t, p in zip(y_true, y_pred) if t == p)
    accuracy = correct / n if n else 0.0
    return precision, recall, f1, macro, accuracy


class TestConfusion:
    def test_diagonal(self):
        cm = confusion([0, 1], [0, 1], 2)
        np.testing.assert_array_equal(cm.counts, [[1, 0], [0, 1]])

    def test_hand_count(self):
        cm = confusion([0, 0, 1], [1, 1, 1], 2)
        np.testing.assert_array_equal(cm.counts, [[0, 2], [0, 1]])

    def test_empty(self):
        cm = confusion([], [], 3)
        np.testing.assert_array_equal(cm.counts, np.zeros((3, 3)))

    def test_row_sums_are_supports(self):
        cm = confusion([0, 0, 1, 2, 2, 2], [0, 1, 1, 2, 0, 2], 3)
        np.testing.assert_array_equal(cm.support(), [2, 1, 3])
        assert cm.total() == 6

    def test_label_out_of_range(self):
        with pytest.raises(ValueError):
            confusion([0, 3], [0, 1], 2)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            confusion([0, 1], [0], 2)


class TestMetrics:
    def test_perfect_diagonal(self):
        report = metrics(confusion([0, 1, 2, 0], [0, 1, 2, 0], 3))
        assert report.macro_f1 == 1.0
        assert report.accuracy == 1.0

    def test_hand_evaluated_case(self):
        report = metrics(confusion([0, 0, 1], [1, 1, 1], 2))
        np.testing.assert_allclose(report.precision, [0.0, 1 / 3], atol=1e-12)
        np.testing.assert_allclose(report.recall, [0.0, 1.0], atol=1e-12)
        np.testing.assert_allclose(report.f1, [0.0, 0.5], atol=1e-12)
        assert report.macro_f1 == pytest.approx(0.25, abs=1e-12)

    def test_matches_bruteforce_on_random_pairs(self):
        rng = np.random.default_rng(99)
        for _ in range(300):
            k = int(rng.choice([2, 5, 8]))
            n = int(rng.integers(1, 200))
            y_true = rng.integers(0, k, size=n)
            y_pred = rng.integers(0, k, size=n)
            report = metrics(confusion(y_true, y_pred, k))
            pi, rho, f1, macro, acc = metrics_oracle(y_true.tolist(), y_pred.tolist(), k)
            np.testing.assert_allclose(report.precision, pi, atol=1e-12)
            np.testing.assert_allclose(report.recall, rho, atol=1e-12)
            np.testing.assert_allclose(report.f1, f1, atol=1e-12)
            assert report.macro_f1 == pytest.approx(macro, abs=1e-12)
            assert report.accuracy == pytest.approx(acc, abs=1e-12)
            assert report.micro_f1 == pytest.approx(acc, abs=1e-12)

    def test_zero_support_class_counts_in_macro(self):
        # class 2 never appears: F_2 = 0 by convention, divisor stays K
        report = metrics(confusion([0, 1], [0, 1], 3))
        assert report.macro_f1 == pytest.approx(2 / 3, abs=1e-12)

    def test_all_metrics_in_unit_interval(self):
        rng = np.random.default_rng(5)
        y_true = rng.integers(0, 4, size=50)
        y_pred = rng.integers(0, 4, size=50)
        report = metrics(confusion(y_true, y_pred, 4))
        for arr in (report.precision, report.recall, report.f1):
            assert ((arr >= 0) & (arr <= 1)).all()
        for v in (report.macro_f1, report.micro_f1, report.accuracy):
            assert 0.0 <= v <= 1.0

    @settings(max_examples=50, deadline=None)
    @given(
        labels=st.lists(
            st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=60
        ),
        perm_seed=st.integers(0, 1000),
    )
    def test_macro_f1_permutation_invariance(self, labels, perm_seed):
        y_true = [t for t, _ in labels]
        y_pred = [p for _, p in labels]
        perm = np.random.default_rng(perm_seed).permutation(5)
        r1 = metrics(confusion(y_true, y_pred, 5))
        r2 = metrics(confusion(perm[y_true], perm[y_pred], 5))
        assert r1.macro_f1 == pytest.approx(r2.macro_f1, abs=1e-12)
        assert r1.accuracy == pytest.approx(r2.accuracy, abs=1e-12)


class TestRoc:
    def test_perfect_separation(self):
        curve = roc_curve([0.9, 0.8, 0.2, 0.1], [True, True, False, False])
        assert curve.auc == 1.0

    def test_constant_scores(self):
        curve = roc_curve([0.5, 0.5, 0.5, 0.5], [True, False, True, False])
        assert curve.auc == 0.5
        np.testing.assert_array_equal(curve.fpr, [0.0, 1.0])
        np.testing.assert_array_equal(curve.tpr, [0.0, 1.0])

    def test_random_scores_near_half(self):
        rng = np.random.default_rng(42)
        scores = rng.random(10_000)
        labels = rng.random(10_000) < 0.5
        curve = roc_curve(scores, labels)
        assert 0.45 <= curve.auc <= 0.55

    def test_single_class_rejected(self):
        with pytest.raises(ValueError):
            roc_curve([0.1, 0.9], [True, True])
        with pytest.raises(ValueError):
            roc_curve([0.1, 0.9], [False, False])

    def test_starts_at_origin_ends_at_one_one(self):
        rng = np.random.default_rng(3)
        curve = roc_curve(rng.random(50), rng.random(50) < 0.4)
        assert (curve.fpr[0], curve.tpr[0]) == (0.0, 0.0)
        assert (curve.fpr[-1], curve.tpr[-1]) == (1.0, 1.0)
        assert (np.diff(curve.fpr) >= 0).all()
        assert (np.diff(curve.tpr) >= 0).all()

    def test_auc_equals_mann_whitney(self):
        rng = np.random.default_rng(8)
        scores = rng.integers(0, 5, size=200).astype(float)  # many ties
        labels = rng.random(200) < 0.5
        curve = roc_curve(scores, labels)
        pos = scores[labels]
        neg = scores[~labels]
        greater = (pos[:, None] > neg[None, :]).sum()
        equal = (pos[:, None] == neg[None, :]).sum()
        mw = (greater + 0.5 * equal) / (len(pos) * len(neg))
        assert curve.auc == pytest.approx(mw, abs=1e-12)

    def test_invariant_under_monotone_transform(self):
        rng = np.random.default_rng(9)
        scores = rng.random(80)
        labels = rng.random(80) < 0.5
        a1 = roc_curve(scores, labels).auc
        a2 = roc_curve(np.exp(3 * scores) + 7, labels).auc
        assert a1 == pytest.approx(a2, abs=1e-12)


class TestOvrRoc:
    def test_complementary_columns_have_equal_auc(self):
        rng = np.random.default_rng(4)
        p0 = rng.random(60)
        proba = np.stack([p0, 1 - p0], axis=1)
        y = rng.integers(0, 2, size=60)
        result = ovr_roc(proba, y)
        assert result.curves["0"].auc == pytest.approx(result.curves["1"].auc, abs=1e-12)

    def test_perfect_classifier(self):
        y = np.array([0, 1, 2, 0, 1, 2])
        proba = np.full((6, 3), 0.05)
        proba[np.arange(6), y] = 0.9
        result = ovr_roc(proba, y)
        assert all(c.auc == 1.0 for c in result.curves.values())

    def test_matches_manual_per_class(self):
        rng = np.random.default_rng(12)
        proba = rng.dirichlet(np.ones(4), size=100)
        y = rng.integers(0, 4, size=100)
        result = ovr_roc(proba, y)
        for k in range(4):
            manual = roc_curve(proba[:, k], y == k)
            assert result.curves[str(k)].auc == pytest.approx(manual.auc, abs=1e-12)

    def test_class_without_positives_omitted(self):
        proba = np.array([[0.6, 0.3, 0.1], [0.2, 0.7, 0.1]])
        result = ovr_roc(proba, np.array([0, 1]), classes=["a", "b", "c"])
        assert result.omitted == ["c"]
        assert set(result.curves) == {"a", "b"}

    def test_rows_must_sum_to_one(self):
        with pytest.raises(ValueError):
            ovr_roc(np.array([[0.9, 0.3]]), np.array([0]))


class TestWriters:
    def test_confusion_csv_layout(self):
        cm = confusion([0, 1], [1, 1], 2, classes=["E", "H"])
        buf = io.StringIO()
        write_confusion_csv(cm, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0].split(",") == ["true\\predicted", "E", "H"]
        assert lines[1] == "E,0,1"
        assert lines[2] == "H,0,1"

    def test_metrics_json_parses(self):
        report = metrics(confusion([0, 1, 1], [0, 1, 0], 2, classes=["a", "b"]))
        buf = io.StringIO()
        write_metrics_json(report, buf)
        import json

        payload = json.loads(buf.getvalue())
        assert 0 <= payload["macro_f1"] <= 1
        assert [row["label"] for row in payload["per_class"]] == ["a", "b"]

    def test_roc_csv_roundtrips(self):
        curve = roc_curve([0.9, 0.1, 0.5], [True, False, True])
        buf = io.StringIO()
        write_roc_csv(curve, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "threshold,fpr,tpr"
        parsed = [tuple(float(v) for v in ln.split(",")) for ln in lines[1:]]
        assert parsed[0][0] == float("inf")
        assert parsed[-1][1:] == (1.0, 1.0)
