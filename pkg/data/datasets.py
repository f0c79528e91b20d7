#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Ensembles d'échantillons
------------------------
Ce module empile les segments en tableaux (X, étiquettes, sujets) pour
l'entraînement et l'évaluation, filtre les tâches (multi-classe ou binaire)
et calcule les statistiques du jeu de données.
"""

from collections import Counter
from dataclasses import dataclass

import numpy as np

from config.data_config import BINARY_CLASSES
from functions.errors import ConfigError

TASKS = ("multiclass", "binary_ad_hc")


@dataclass
class SegmentArray:
    """Segments empilés: X [n, T, C], étiquettes [n], sujets [n]."""

    X: np.ndarray
    labels: np.ndarray
    subjects: np.ndarray

    def __len__(self):
        return self.X.shape[0]

    @classmethod
    def from_segments(cls, segments, window_len=None, channels=None):
        """
        Empile une liste de Segment.

        Args:
            segments (list): Liste de Segment de même forme
            window_len (int, optional): T attendu si la liste est vide
            channels (int, optional): C attendu si la liste est vide

        Returns:
            SegmentArray: Les segments empilés
        """
        if not segments:
            return cls(np.zeros((0, window_len or 0, channels or 0)),
                       np.zeros(0, dtype=np.int64), np.zeros(0, dtype=object))
        X = np.stack([s.data for s in segments])
        labels = np.array([s.label for s in segments], dtype=np.int64)
        subjects = np.array([s.subject_id for s in segments], dtype=object)
        return cls(X, labels, subjects)

    def subset(self, subject_ids):
        """
        Restreint aux segments des sujets donnés.

        Args:
            subject_ids (iterable): Identifiants de sujets à garder

        Returns:
            SegmentArray: Sous-ensemble
        """
        keep = np.isin(self.subjects, list(subject_ids))
        return SegmentArray(self.X[keep], self.labels[keep], self.subjects[keep])

    def subject_labels(self):
        """Dictionnaire sujet -> étiquette (un sujet porte une seule étiquette)."""
        mapping = {}
        for subject, label in zip(self.subjects, self.labels):
            mapping.setdefault(str(subject), int(label))
        return mapping


def apply_task(recordings, task="multiclass", binary_classes=BINARY_CLASSES):
    """
    Filtre les enregistrements selon la tâche.

    La tâche binaire ne garde que les deux classes désignées (AD, HC) et les
    renumérote en {0, 1} dans l'ordre donné.

    Args:
        recordings (list): Liste de Recording
        task (str): "multiclass" ou "binary_ad_hc"
        binary_classes (tuple): Les deux indices de classe retenus

    Returns:
        list: Enregistrements filtrés
    """
    if task == "multiclass":
        return list(recordings)
    if task != "binary_ad_hc":
        raise ConfigError("tâche inconnue", key="task", value=task, constraint=f"une de {TASKS}")
    if len(binary_classes) != 2 or binary_classes[0] == binary_classes[1]:
        raise ConfigError("deux classes distinctes attendues", key="binary_classes",
                          value=binary_classes, constraint="deux indices distincts")
    relabel = {binary_classes[0]: 0, binary_classes[1]: 1}
    return [rec.__class__(rec.subject_id, relabel[rec.label], rec.sampling_rate_hz, rec.series)
            for rec in recordings if rec.label in relabel]


def dataset_statistics(recordings, samples, dropped=0):
    """
    Statistiques du jeu de données traité (sujets et échantillons par classe).

    Args:
        recordings (list): Enregistrements après filtrage de la tâche
        samples (SegmentArray): Segments obtenus
        dropped (int): Nombre d'enregistrements trop courts pour une fenêtre

    Returns:
        dict: Statistiques sérialisables en JSON
    """
    subjects_per_class = Counter(rec.label for rec in recordings)
    samples_per_class = Counter(int(label) for label in samples.labels)
    classes = sorted(set(subjects_per_class) | set(samples_per_class))
    return {
        "subjects": len(recordings),
        "samples": len(samples),
        "dropped_recordings": int(dropped),
        "window_len": int(samples.X.shape[1]) if len(samples) else None,
        "channels": int(samples.X.shape[2]) if len(samples) else None,
        "per_class": {str(k): {"subjects": subjects_per_class.get(k, 0),
                               "samples": samples_per_class.get(k, 0)} for k in classes},
    }
