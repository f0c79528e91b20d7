#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Filtrage et ré-échantillonnage
------------------------------
Ce module contient le filtre passe-bande FIR (sinus cardinal fenêtré, appliqué
aller-retour pour une phase nulle) et le ré-échantillonnage vers une fréquence
plus basse (décimation pour les rapports entiers, polyphase sinon).
"""

import logging
from fractions import Fraction

import numpy as np
from scipy import signal

from config.data_config import FIR_TAPS_PER_CYCLE
from functions.errors import ParameterError, UnsupportedError

logger = logging.getLogger(__name__)


def round_half_up(x):
    """Arrondi à l'entier le plus proche, les demis vers le haut."""
    return int(np.floor(x + 0.5))


def design_bandpass(rate_hz, low_hz, high_hz):
    """
    Calcule les coefficients du filtre FIR passe-bande.

    La longueur couvre FIR_TAPS_PER_CYCLE périodes de la coupure basse, ce qui
    place la bande de transition basse à environ ±0.2 Hz autour de 0.5 Hz.

    Args:
        rate_hz (float): Fréquence d'échantillonnage
        low_hz (float): Coupure basse
        high_hz (float): Coupure haute

    Returns:
        ndarray: Coefficients (nombre impair)
    """
    if not 0 < low_hz < high_hz < rate_hz / 2:
        raise ParameterError(
            f"bandpass: bande [{low_hz}, {high_hz}] Hz invalide pour {rate_hz} Hz (Nyquist {rate_hz / 2})")
    numtaps = int(FIR_TAPS_PER_CYCLE * rate_hz / low_hz) | 1
    return signal.firwin(numtaps, [low_hz, high_hz], pass_zero=False, fs=rate_hz, window="hamming")


def bandpass(rec, low_hz, high_hz):
    """
    Filtre passe-bande à phase nulle, canal par canal.

    Args:
        rec (Recording): Enregistrement
        low_hz (float): Coupure basse
        high_hz (float): Coupure haute

    Returns:
        Recording: Enregistrement filtré, de même longueur
    """
    taps = design_bandpass(rec.sampling_rate_hz, low_hz, high_hz)
    samples = rec.samples
    if samples < 2:
        return rec.replace_series(rec.series.copy())
    padlen = min(3 * len(taps), samples - 1)
    filtered = signal.filtfilt(taps, [1.0], rec.series, axis=-1, padlen=padlen)
    return rec.replace_series(filtered)


def resample(rec, target_hz):
    """
    Ré-échantillonne vers une fréquence inférieure ou égale.

    Args:
        rec (Recording): Enregistrement
        target_hz (float): Fréquence cible

    Returns:
        Recording: Enregistrement de longueur round(S·cible/source)
    """
    source_hz = rec.sampling_rate_hz
    if target_hz == source_hz:
        return rec
    if target_hz > source_hz:
        raise UnsupportedError(f"resample: sur-échantillonnage {source_hz} -> {target_hz} Hz non pris en charge")
    new_len = round_half_up(rec.samples * target_hz / source_hz)
    ratio = source_hz / target_hz
    if float(ratio).is_integer():
        # Filtre anti-repliement puis décimation
        out = signal.decimate(rec.series, int(ratio), ftype="fir", axis=-1, zero_phase=True)
    else:
        fraction = Fraction(str(target_hz)) / Fraction(str(source_hz))
        out = signal.resample_poly(rec.series, fraction.numerator, fraction.denominator, axis=-1)
    logger.debug("resample %s: %s -> %s Hz, %d -> %d échantillons",
                 rec.subject_id, source_hz, target_hz, rec.samples, new_len)
    return rec.replace_series(out[:, :new_len], sampling_rate_hz=float(target_hz))
