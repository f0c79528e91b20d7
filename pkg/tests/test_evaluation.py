#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import itertools
import logging

import numpy as np
import pytest
from sklearn.metrics import f1_score as sk_f1_score

from data.datasets import SegmentArray
from functions.errors import ConfigError, LeakageError, ParameterError
from functions.evaluation.metrics import (
    LevelMetrics, MetricsReport, accuracy, aggregate_reports, confusion, evaluate, f1_macro, f1_per_class,
    f1_weighted, majority_vote, metrics_from_probabilities,
)
from functions.evaluation.splits import SplitPlan, largest_remainder, split_data, split_subjects


def subjects(n, classes=2):
    return {f"sub-{i + 1:03d}": i % classes for i in range(n)}


@pytest.mark.parametrize("total, expected", [(10, [6, 2, 2]), (5, [3, 1, 1]), (6, [4, 1, 1]), (3, [1, 1, 1])])
def test_largest_remainder(total, expected):
    assert largest_remainder(total, (6, 2, 2)) == expected


def test_split_sizes_and_classes():
    plan = split_subjects(subjects(10), seed=41)
    assert plan.sizes() == (6, 2, 2)
    assert plan.stratified
    labels = subjects(10)
    for name in ("train", "val", "test"):
        assert {labels[s] for s in getattr(plan, name)} == {0, 1}
    assert split_subjects(subjects(5), seed=3).sizes() == (3, 1, 1)


def test_split_is_deterministic_per_seed():
    assert split_subjects(subjects(20), seed=42) == split_subjects(subjects(20), seed=42)
    plans = {split_subjects(subjects(20), seed=s).test for s in range(41, 46)}
    assert len(plans) > 1


def test_random_splits_are_disjoint_and_complete(rng):
    for trial in range(1000):
        n = int(rng.integers(3, 40))
        labels = {f"s{i}": int(rng.integers(0, 3)) for i in range(n)}
        plan = split_subjects(labels, seed=trial, stratify=bool(trial % 2))
        union = set(plan.train) | set(plan.val) | set(plan.test)
        assert union == set(labels)
        assert len(plan.train) + len(plan.val) + len(plan.test) == n
        assert all(plan.sizes())


def test_split_falls_back_when_a_class_misses_train(caplog):
    # La répartition par classe envoie l'unique sujet de la classe 1 en validation
    labels = {"a": 0, "b": 1, "c": 2, "d": 2, "e": 2}
    with caplog.at_level(logging.WARNING):
        plan = split_subjects(labels, seed=0)
    assert plan.sizes() == (3, 1, 1)
    assert not plan.stratified
    assert "sans sujet d'entraînement" in caplog.text


def test_split_errors():
    with pytest.raises(ConfigError):
        split_subjects({"a": 0, "b": 1}, seed=0)
    with pytest.raises(LeakageError):
        SplitPlan(0, ("a", "b"), ("b",), ("c",))


def test_split_data_keeps_subjects_whole(random_samples):
    data = random_samples(n=60, subjects=10)
    plan = split_subjects(data.subject_labels(), seed=41)
    train, val, test = split_data(data, plan)
    assert len(train) + len(val) + len(test) == 60
    assert set(train.subjects) == set(plan.train)
    assert set(test.subjects) == set(plan.test)
    partial = SplitPlan(0, ("s0",), ("s1",), ("s2",))
    with pytest.raises(LeakageError):
        split_data(data, partial)


def test_majority_vote_examples():
    assert majority_vote([0, 0, 1]) == 0
    assert majority_vote([2, 1, 2, 2]) == 2
    assert majority_vote([1, 0]) == 0
    probs = np.array([[0.4, 0.6], [0.9, 0.1]])
    assert majority_vote([1, 0], probs) == 0
    probs = np.array([[0.45, 0.55], [0.51, 0.49]])
    assert majority_vote([1, 0], probs) == 1
    with pytest.raises(ParameterError):
        majority_vote([])


def test_majority_vote_matches_brute_force(rng):
    for _ in range(10000):
        n, K = int(rng.integers(1, 8)), int(rng.integers(2, 5))
        preds = rng.integers(0, K, size=n)
        counts = np.bincount(preds, minlength=K)
        expected = min(k for k in range(K) if counts[k] == counts.max())
        assert majority_vote(preds) == expected


def test_f1_examples():
    conf = np.array([[8, 2], [3, 7]])
    assert f1_macro(conf) == pytest.approx(0.7494, abs=1e-4)
    assert accuracy(conf) == pytest.approx(0.75)
    all_one = confusion([0, 0, 1, 1, 2, 2], [0] * 6, 3)
    assert f1_macro(all_one) == pytest.approx(1 / 6)
    one_class = confusion([0, 0, 1, 1], [0, 0, 0, 0], 2)
    assert np.allclose(f1_per_class(one_class), [2 / 3, 0.0])
    assert f1_macro(one_class) == pytest.approx(1 / 3)
    perfect = confusion([0, 1, 1, 2], [0, 1, 1, 2], 3)
    assert f1_macro(perfect) == 1.0
    assert np.array_equal(f1_per_class(np.zeros((2, 2))), [0.0, 0.0])


def test_f1_agrees_with_sklearn(rng):
    for _ in range(50):
        K = int(rng.integers(2, 5))
        y_true, y_pred = rng.integers(0, K, size=40), rng.integers(0, K, size=40)
        conf = confusion(y_true, y_pred, K)
        labels = list(range(K))
        assert f1_macro(conf) == pytest.approx(
            sk_f1_score(y_true, y_pred, labels=labels, average="macro", zero_division=0))
        assert f1_weighted(conf) == pytest.approx(
            sk_f1_score(y_true, y_pred, labels=labels, average="weighted", zero_division=0))


def test_subject_level_uses_votes():
    probs = np.array([[0.9, 0.1], [0.8, 0.2], [0.3, 0.7], [0.2, 0.8], [0.1, 0.9], [0.6, 0.4]])
    labels = [0, 0, 0, 1, 1, 1]
    report = metrics_from_probabilities(probs, labels, ["a", "a", "a", "b", "b", "b"], 2, seed=41)
    assert report.sample_accuracy == pytest.approx(4 / 6)
    assert report.subject_predictions == {"a": 0, "b": 1}
    assert report.subject_accuracy == 1.0 and report.subject_f1_macro == 1.0
    assert list(report.values()) == ["sample_accuracy", "sample_f1_macro", "subject_accuracy", "subject_f1_macro"]


class FixedModel:
    """Modèle de test: probabilités données par une fonction des segments."""

    def __init__(self, classes, fn):
        self.config = type("Config", (), {"classes": classes})()
        self.fn = fn

    def predict_proba(self, X, batch_size=256):
        return self.fn(X)


def test_evaluate_perfect_model():
    X = np.zeros((6, 4, 2))
    X[:3, 0, 0] = 1.0
    data = SegmentArray(X, np.array([1, 1, 1, 0, 0, 0]), np.array(["c", "c", "c", "d", "d", "d"], dtype=object))
    model = FixedModel(2, lambda x: np.stack([1.0 - x[:, 0, 0], x[:, 0, 0]], axis=1))
    plan = SplitPlan(41, ("a",), ("b",), ("c", "d"))
    report = evaluate(model, plan, data)
    assert report.seed == 41
    assert report.sample_accuracy == 1.0 and report.subject_f1_macro == 1.0


def test_evaluate_refuses_leaked_subjects():
    data = SegmentArray(np.zeros((2, 4, 2)), np.array([0, 1]), np.array(["a", "c"], dtype=object))
    model = FixedModel(2, lambda x: np.full((len(x), 2), 0.5))
    with pytest.raises(LeakageError):
        evaluate(model, SplitPlan(0, ("a",), ("b",), ("c",)), data)
    with pytest.raises(LeakageError):
        evaluate(model, SplitPlan(0, ("x",), ("b",), ("c",)), data)


def test_aggregate_uses_population_std():
    reports = []
    for value in (0.6, 0.8):
        level = LevelMetrics(value, value, value, np.zeros((2, 2), dtype=np.int64))
        reports.append(MetricsReport(level, level))
    agg = aggregate_reports(reports)
    assert agg["sample_accuracy"]["mean"] == pytest.approx(0.7)
    assert agg["sample_accuracy"]["std"] == pytest.approx(0.1)
    assert agg["subject_f1_weighted"]["values"] == [0.6, 0.8]
    with pytest.raises(ParameterError):
        aggregate_reports([])


def test_confusion_counts_every_pair():
    y = list(itertools.product(range(3), repeat=2))
    conf = confusion([a for a, _ in y], [b for _, b in y], 3)
    assert np.array_equal(conf, np.ones((3, 3)))
