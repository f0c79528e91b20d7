#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Chaîne de prétraitement
-----------------------
Ce module enchaîne les étapes de prétraitement sur une liste d'enregistrements:
passe-bande, ré-échantillonnage, segmentation avec recouvrement, z-score.
"""

import logging
from dataclasses import dataclass

from data.datasets import SegmentArray, dataset_statistics
from functions.preprocessing.filters import bandpass, resample
from functions.preprocessing.segmentation import segment, zscore

logger = logging.getLogger(__name__)


@dataclass
class PreparedData:
    """Résultat du prétraitement: échantillons empilés et statistiques."""

    samples: SegmentArray
    statistics: dict
    dropped: int


def preprocess_recording(rec, policy):
    """
    Filtre puis ré-échantillonne un enregistrement.

    Args:
        rec (Recording): Enregistrement brut
        policy (SegmentationPolicy): Paramètres de prétraitement

    Returns:
        Recording: Enregistrement prêt à être segmenté
    """
    if policy.bandpass is not None:
        low, high = policy.bandpass
        rec = bandpass(rec, low, high)
    return resample(rec, policy.target_rate_hz)


def prepare(recordings, policy, per_channel=False):
    """
    Prétraite une liste d'enregistrements et empile les segments normalisés.

    Args:
        recordings (list): Liste de Recording
        policy (SegmentationPolicy): Paramètres de prétraitement
        per_channel (bool): z-score par canal

    Returns:
        PreparedData: Segments, statistiques et nombre d'enregistrements ignorés
    """
    segments = []
    dropped = 0
    channels = None
    for rec in recordings:
        channels = rec.channels
        windows = segment(preprocess_recording(rec, policy), policy)
        if not windows:
            dropped += 1
        segments.extend(zscore(w, per_channel=per_channel) for w in windows)
    samples = SegmentArray.from_segments(segments, policy.window_len, channels)
    logger.info("Prétraitement: %d sujets, %d échantillons (T=%d, pas=%d), %d ignorés",
                len(recordings), len(samples), policy.window_len, policy.stride, dropped)
    return PreparedData(samples, dataset_statistics(recordings, samples, dropped), dropped)
