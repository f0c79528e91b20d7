#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Métriques
---------
Ce module calcule les métriques au niveau échantillon et au niveau sujet:

- exactitude et F1 (macro ou pondéré) à partir de la matrice de confusion;
- vote majoritaire des prédictions d'un sujet (égalités départagées par la
  probabilité moyenne la plus haute, puis par le plus petit indice de classe);
- agrégation moyenne ± écart-type sur plusieurs graines.
"""

import logging
from collections import Counter, OrderedDict
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
from sklearn.metrics import confusion_matrix as _sk_confusion

from functions.errors import LeakageError, ParameterError

logger = logging.getLogger(__name__)

METRIC_NAMES = ("sample_accuracy", "sample_f1_macro", "subject_accuracy", "subject_f1_macro")


def confusion(y_true, y_pred, classes):
    """
    Matrice de confusion K×K (lignes: vérité, colonnes: prédiction).

    Args:
        y_true (array_like): Étiquettes vraies
        y_pred (array_like): Prédictions
        classes (int): Nombre de classes K

    Returns:
        ndarray: Comptes entiers
    """
    y_true = np.asarray(y_true, dtype=np.int64)
    if y_true.size == 0:
        return np.zeros((classes, classes), dtype=np.int64)
    return _sk_confusion(y_true, np.asarray(y_pred, dtype=np.int64), labels=list(range(classes))).astype(np.int64)


def f1_per_class(conf):
    """F1 de chaque classe: 2PR/(P+R) = 2TP/(2TP+FP+FN), 0 si P+R = 0."""
    conf = np.asarray(conf, dtype=np.float64)
    tp = np.diag(conf)
    denom = 2 * tp + (conf.sum(axis=0) - tp) + (conf.sum(axis=1) - tp)
    out = np.zeros_like(tp)
    np.divide(2 * tp, denom, out=out, where=denom > 0)
    return out


def f1_macro(conf):
    return float(np.mean(f1_per_class(conf)))


def f1_weighted(conf):
    """F1 moyen pondéré par le support (nombre d'exemples vrais) de chaque classe."""
    support = np.asarray(conf, dtype=np.float64).sum(axis=1)
    if support.sum() == 0:
        return 0.0
    return float(np.sum(f1_per_class(conf) * support) / support.sum())


def f1_score(conf, average="macro"):
    if average == "macro":
        return f1_macro(conf)
    if average == "weighted":
        return f1_weighted(conf)
    raise ParameterError(f"moyenne F1 inconnue: {average}")


def accuracy(conf):
    conf = np.asarray(conf)
    total = conf.sum()
    return float(np.trace(conf) / total) if total else 0.0


def majority_vote(predictions, probabilities=None):
    """
    Étiquette d'un sujet par vote majoritaire de ses échantillons.

    Args:
        predictions (array_like): Classes prédites des échantillons
        probabilities (ndarray, optional): Probabilités [n, K] des échantillons

    Returns:
        int: Classe retenue
    """
    predictions = [int(p) for p in np.asarray(predictions).reshape(-1)]
    if not predictions:
        raise ParameterError("vote majoritaire sur une liste vide")
    counts = Counter(predictions)
    top = max(counts.values())
    tied = sorted(k for k, c in counts.items() if c == top)
    if len(tied) == 1 or probabilities is None:
        return tied[0]
    mean_prob = np.asarray(probabilities, dtype=np.float64).mean(axis=0)
    best = max(mean_prob[k] for k in tied)
    return min(k for k in tied if mean_prob[k] == best)


@dataclass
class LevelMetrics:
    """Métriques d'un niveau (échantillon ou sujet)."""

    accuracy: float
    f1_macro: float
    f1_weighted: float
    confusion: np.ndarray

    @classmethod
    def from_labels(cls, y_true, y_pred, classes):
        conf = confusion(y_true, y_pred, classes)
        return cls(accuracy(conf), f1_macro(conf), f1_weighted(conf), conf)

    def to_dict(self):
        return {"accuracy": self.accuracy, "f1_macro": self.f1_macro, "f1_weighted": self.f1_weighted,
                "confusion": self.confusion.astype(int).tolist()}


@dataclass
class MetricsReport:
    """Métriques d'une graine aux deux niveaux."""

    sample: LevelMetrics
    subject: LevelMetrics
    seed: Optional[int] = None
    subject_predictions: Dict[str, int] = field(default_factory=dict)

    @property
    def sample_accuracy(self):
        return self.sample.accuracy

    @property
    def sample_f1_macro(self):
        return self.sample.f1_macro

    @property
    def subject_accuracy(self):
        return self.subject.accuracy

    @property
    def subject_f1_macro(self):
        return self.subject.f1_macro

    def values(self):
        return OrderedDict((name, getattr(self, name)) for name in METRIC_NAMES)

    def to_dict(self):
        return {"seed": self.seed, **self.values(),
                "sample_f1_weighted": self.sample.f1_weighted,
                "subject_f1_weighted": self.subject.f1_weighted,
                "sample_confusion": self.sample.confusion.astype(int).tolist(),
                "subject_confusion": self.subject.confusion.astype(int).tolist(),
                "subject_predictions": dict(self.subject_predictions)}


def metrics_from_probabilities(probs, labels, subjects, classes, seed=None):
    """
    Métriques échantillon (argmax) et sujet (vote majoritaire).

    Args:
        probs (ndarray): Probabilités [n, K]
        labels (array_like): Étiquettes vraies [n]
        subjects (array_like): Sujet de chaque échantillon [n]
        classes (int): Nombre de classes K
        seed (int, optional): Graine rapportée

    Returns:
        MetricsReport: Les métriques
    """
    probs = np.asarray(probs)
    labels = np.asarray(labels, dtype=np.int64)
    subjects = np.asarray([str(s) for s in subjects], dtype=object)
    preds = np.argmax(probs, axis=1) if len(probs) else np.zeros(0, dtype=np.int64)
    sample = LevelMetrics.from_labels(labels, preds, classes)

    votes, truths = OrderedDict(), []
    for subject in sorted(set(subjects)):
        rows = subjects == subject
        votes[subject] = majority_vote(preds[rows], probs[rows])
        truths.append(int(labels[rows][0]))
    subject = LevelMetrics.from_labels(truths, list(votes.values()), classes)
    return MetricsReport(sample, subject, seed, votes)


def evaluate(model, plan, data, batch_size=256):
    """
    Évalue un modèle sur les segments de test d'une partition.

    Args:
        model (ADformer): Modèle entraîné (predict_proba, config.classes)
        plan (SplitPlan): Partition utilisée pour l'entraînement
        data (SegmentArray): Segments de test
        batch_size (int): Taille des lots d'inférence

    Returns:
        MetricsReport: Les métriques

    Raises:
        LeakageError: Un segment évalué appartient à un sujet vu à l'entraînement
            ou à la validation
    """
    seen = set(plan.train) | set(plan.val)
    leaked = sorted({str(s) for s in data.subjects} & seen)
    if leaked:
        raise LeakageError(f"sujets d'entraînement/validation dans le test: {leaked[:5]}")
    outside = sorted({str(s) for s in data.subjects} - set(plan.test))
    if outside:
        raise LeakageError(f"sujets hors de la partition de test: {outside[:5]}")
    probs = model.predict_proba(data.X, batch_size=batch_size)
    report = metrics_from_probabilities(probs, data.labels, data.subjects, model.config.classes, plan.seed)
    logger.info("graine %s: exactitude échantillon %.4f, F1 sujet %.4f",
                plan.seed, report.sample_accuracy, report.subject_f1_macro)
    return report


def aggregate_reports(reports: List[MetricsReport]):
    """
    Moyenne et écart-type (population) de chaque métrique sur les graines.

    Args:
        reports (list): MetricsReport des graines

    Returns:
        OrderedDict: Métrique -> {"mean", "std", "values"}
    """
    if not reports:
        raise ParameterError("aucun rapport à agréger")
    out = OrderedDict()
    for name in METRIC_NAMES + ("sample_f1_weighted", "subject_f1_weighted"):
        if name.endswith("_weighted"):
            level = name.split("_", 1)[0]
            values = [getattr(r, level).f1_weighted for r in reports]
        else:
            values = [getattr(r, name) for r in reports]
        out[name] = {"mean": float(np.mean(values)), "std": float(np.std(values)), "values": values}
    return out
