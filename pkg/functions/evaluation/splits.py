#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Partition par sujet
-------------------
Ce module planifie les partitions entraînement/validation/test indépendantes des
sujets (validation croisée Monte-Carlo): tous les segments d'un sujet tombent dans
une seule partition. Les tailles suivent le ratio 6:2:2 au plus fort reste, et les
sujets sont répartis classe par classe pour que chaque partition voie toutes les classes.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.training_config import SPLIT_RATIO
from functions.errors import ConfigError, LeakageError

logger = logging.getLogger(__name__)

SPLIT_NAMES = ("train", "val", "test")


@dataclass(frozen=True)
class SplitPlan:
    """Ensembles de sujets disjoints d'une graine."""

    seed: int
    train: Tuple[str, ...]
    val: Tuple[str, ...]
    test: Tuple[str, ...]
    stratified: bool = True

    def __post_init__(self):
        check_disjoint(self)

    def split_of(self, subject_id):
        """
        Partition d'un sujet.

        Args:
            subject_id (str): Identifiant

        Returns:
            str: "train", "val" ou "test"
        """
        for name in SPLIT_NAMES:
            if subject_id in getattr(self, name):
                return name
        raise KeyError(subject_id)

    def sizes(self):
        return tuple(len(getattr(self, name)) for name in SPLIT_NAMES)

    def to_dict(self):
        return {"seed": self.seed, "stratified": self.stratified,
                **{name: list(getattr(self, name)) for name in SPLIT_NAMES}}


def check_disjoint(plan):
    """Lève LeakageError si un sujet apparaît dans deux partitions."""
    seen = {}
    for name in SPLIT_NAMES:
        for subject in getattr(plan, name):
            if subject in seen:
                raise LeakageError(f"sujet {subject} à la fois dans {seen[subject]} et {name}")
            seen[subject] = name


def largest_remainder(total, ratio=SPLIT_RATIO):
    """
    Répartit un entier selon un ratio (méthode du plus fort reste).
    Dès trois éléments, chaque partition reçoit au moins un élément.

    Args:
        total (int): Nombre à répartir
        ratio (tuple): Poids des partitions

    Returns:
        list: Effectifs, de somme total
    """
    weights = np.asarray(ratio, dtype=np.float64)
    if (weights < 0).any() or weights.sum() <= 0:
        raise ConfigError("ratio invalide", key="split_ratio", value=ratio, constraint="poids positifs")
    quotas = total * weights / weights.sum()
    counts = np.floor(quotas).astype(int)
    remainders = quotas - counts
    # Tri stable: à reste égal, la première partition l'emporte
    for k in np.argsort(-remainders, kind="stable")[: total - counts.sum()]:
        counts[k] += 1
    if total >= len(counts):
        for k in range(len(counts)):
            if counts[k] == 0 and weights[k] > 0:
                counts[int(np.argmax(counts))] -= 1
                counts[k] += 1
    return [int(c) for c in counts]


def _spread(targets):
    """Suite de partitions de longueur Σ targets, chaque partition répartie uniformément."""
    total = sum(targets)
    assigned = [0] * len(targets)
    sequence = []
    for p in range(1, total + 1):
        deficits = [t * p / total - a for t, a in zip(targets, assigned)]
        k = int(np.argmax(deficits))
        assigned[k] += 1
        sequence.append(k)
    return sequence


def _deal(ordered_subjects, targets, seed, stratified):
    sequence = _spread(targets)
    buckets = [[] for _ in targets]
    for subject, k in zip(ordered_subjects, sequence):
        buckets[k].append(subject)
    return SplitPlan(seed, *(tuple(sorted(b)) for b in buckets), stratified=stratified)


def split_subjects(subject_labels, ratio=SPLIT_RATIO, seed=0, stratify=True):
    """
    Planifie une partition par sujet.

    Les effectifs globaux suivent le plus fort reste. En mode stratifié, les sujets
    sont mélangés à l'intérieur de chaque classe, regroupés par classe, puis
    distribués le long d'une suite où chaque partition est étalée uniformément.
    Si une classe n'a aucun sujet d'entraînement, un avertissement est émis et la
    partition est refaite sans stratification.

    Args:
        subject_labels (dict): Sujet -> étiquette
        ratio (tuple): Ratio train:val:test
        seed (int): Graine
        stratify (bool): Répartition classe par classe

    Returns:
        SplitPlan: La partition
    """
    subjects = sorted(subject_labels)
    if len(subjects) < 3:
        raise ConfigError("trop peu de sujets", key="subjects", value=len(subjects), constraint=">= 3")
    targets = largest_remainder(len(subjects), ratio)
    rng = np.random.default_rng(seed)

    if stratify:
        by_class = defaultdict(list)
        for subject in subjects:
            by_class[subject_labels[subject]].append(subject)
        ordered = []
        for label in sorted(by_class):
            members = list(by_class[label])
            rng.shuffle(members)
            ordered.extend(members)
        plan = _deal(ordered, targets, seed, stratified=True)
        train_classes = {subject_labels[s] for s in plan.train}
        missing = sorted(set(by_class) - train_classes)
        if not missing:
            return plan
        logger.warning("graine %d: classes %s sans sujet d'entraînement, partition non stratifiée", seed, missing)

    ordered = list(subjects)
    rng.shuffle(ordered)
    return _deal(ordered, targets, seed, stratified=False)


def split_data(data, plan):
    """
    Découpe les segments selon la partition.

    Args:
        data (SegmentArray): Segments
        plan (SplitPlan): Partition

    Returns:
        tuple: (train, val, test) SegmentArray
    """
    check_leakage(plan, data)
    return tuple(data.subset(getattr(plan, name)) for name in SPLIT_NAMES)


def check_leakage(plan, data):
    """
    Vérifie que chaque segment appartient à exactement une partition.

    Args:
        plan (SplitPlan): Partition
        data (SegmentArray): Segments

    Raises:
        LeakageError: Sujet inconnu de la partition
    """
    check_disjoint(plan)
    known = set(plan.train) | set(plan.val) | set(plan.test)
    unknown = sorted({str(s) for s in data.subjects} - known)
    if unknown:
        raise LeakageError(f"sujets absents de la partition: {unknown[:5]}")
