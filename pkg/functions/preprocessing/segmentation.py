#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Segmentation et normalisation
-----------------------------
Ce module découpe les enregistrements en fenêtres de T instants avec recouvrement
et normalise chaque fenêtre (z-score).
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from config.data_config import BANDPASS, OVERLAP_RATIO, TARGET_RATE_HZ, WINDOW_LEN, ZSCORE_EPS
from data.recordings import Segment
from functions.errors import ConfigError
from functions.preprocessing.filters import round_half_up

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SegmentationPolicy:
    """Paramètres de segmentation: longueur, recouvrement, fréquence cible, bande passante."""

    window_len: int = WINDOW_LEN
    overlap_ratio: float = OVERLAP_RATIO
    target_rate_hz: float = TARGET_RATE_HZ
    bandpass: Optional[Tuple[float, float]] = BANDPASS

    def __post_init__(self):
        if self.window_len < 1:
            raise ConfigError("longueur de fenêtre invalide", key="window_len",
                              value=self.window_len, constraint=">= 1")
        if not 0.0 <= self.overlap_ratio < 1.0:
            raise ConfigError("recouvrement invalide", key="overlap_ratio",
                              value=self.overlap_ratio, constraint="dans [0, 1)")
        if self.target_rate_hz <= 0:
            raise ConfigError("fréquence cible invalide", key="target_rate_hz",
                              value=self.target_rate_hz, constraint="> 0")
        if self.stride < 1:
            raise ConfigError("pas de fenêtre nul", key="overlap_ratio", value=self.overlap_ratio,
                              constraint="round(T·(1−r)) >= 1")

    @property
    def stride(self):
        return round_half_up(self.window_len * (1.0 - self.overlap_ratio))


def segment_count(samples, window_len, stride):
    """
    Nombre de fenêtres complètes.

    Args:
        samples (int): Longueur S de l'enregistrement
        window_len (int): Longueur T d'une fenêtre
        stride (int): Pas entre deux fenêtres

    Returns:
        int: floor((S−T)/pas)+1 si S >= T, 0 sinon
    """
    if samples < window_len:
        return 0
    return (samples - window_len) // stride + 1


def segment(rec, policy):
    """
    Découpe un enregistrement en fenêtres T×C ordonnées.
    Les fins de série plus courtes que T sont abandonnées, sans remplissage.

    Args:
        rec (Recording): Enregistrement (déjà filtré et ré-échantillonné)
        policy (SegmentationPolicy): Paramètres de segmentation

    Returns:
        list: Liste de Segment (vide si l'enregistrement est trop court)
    """
    T, stride = policy.window_len, policy.stride
    count = segment_count(rec.samples, T, stride)
    if count == 0:
        logger.warning("Enregistrement %s trop court (%d < %d instants), ignoré",
                       rec.subject_id, rec.samples, T)
        return []
    segments = []
    for k in range(count):
        start = k * stride
        window = rec.series[:, start:start + T].T.copy()
        segments.append(Segment(rec.subject_id, rec.label, window, window_index=k))
    return segments


def zscore(seg, per_channel=False, eps=ZSCORE_EPS):
    """
    Normalisation z-score d'un segment: (x−μ)/(σ+eps).

    Args:
        seg (Segment): Segment à normaliser
        per_channel (bool): μ et σ par canal plutôt que sur tout le segment T×C
        eps (float): Plancher de l'écart-type

    Returns:
        Segment: Segment normalisé (nul si le segment est constant)
    """
    x = seg.data
    axis = 0 if per_channel else None
    mu = x.mean(axis=axis, keepdims=per_channel)
    sigma = x.std(axis=axis, keepdims=per_channel)
    normalized = (x - mu) / (sigma + eps)
    # Canaux (ou segment) constants -> zéro exact
    flat = np.ptp(x, axis=axis, keepdims=per_channel) == 0
    normalized = np.where(flat, 0.0, normalized)
    return Segment(seg.subject_id, seg.label, normalized, seg.window_index, dict(seg.meta))
