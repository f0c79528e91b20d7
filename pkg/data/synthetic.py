#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Données synthétiques
--------------------
Ce module génère des enregistrements étiquetés à la place des jeux de données
cliniques: chaque classe émet des sinusoïdes à une fréquence de base propre,
avec des déphasages aléatoires par sujet et un bruit gaussien.
"""

import numpy as np

from config.data_config import (
    SYNTH_BASE_FREQ_HZ, SYNTH_CHANNELS, SYNTH_CLASSES, SYNTH_DURATION_S,
    SYNTH_NOISE_STD, SYNTH_RATE_HZ, SYNTH_SEED, SYNTH_SUBJECTS,
)
from data.recordings import Recording
from functions.errors import ParameterError


def class_frequency(label):
    """
    Fréquence de base d'une classe.

    Args:
        label (int): Indice de classe

    Returns:
        float: Fréquence en Hz (classe 0 -> 5 Hz, classe 1 -> 10 Hz, ...)
    """
    return SYNTH_BASE_FREQ_HZ * (label + 1)


def synth_generate(n_subjects=SYNTH_SUBJECTS, classes=SYNTH_CLASSES, channels=SYNTH_CHANNELS,
                   rate_hz=SYNTH_RATE_HZ, duration_s=SYNTH_DURATION_S, seed=SYNTH_SEED,
                   noise_std=SYNTH_NOISE_STD):
    """
    Génère des enregistrements synthétiques, de façon déterministe pour une graine.

    Les classes sont attribuées à tour de rôle (sujet i -> classe i mod K).

    Args:
        n_subjects (int): Nombre de sujets
        classes (int): Nombre de classes K
        channels (int): Nombre de canaux C
        rate_hz (float): Fréquence d'échantillonnage
        duration_s (float): Durée de chaque enregistrement
        seed (int): Graine
        noise_std (float): Écart-type du bruit gaussien

    Returns:
        list: Liste de Recording
    """
    if min(n_subjects, classes, channels, rate_hz, duration_s) <= 0:
        raise ParameterError("synth_generate: tous les paramètres doivent être positifs")
    rng = np.random.default_rng(seed)
    samples = int(round(rate_hz * duration_s))
    t = np.arange(samples) / rate_hz
    recordings = []
    for i in range(n_subjects):
        label = i % classes
        freq = class_frequency(label)
        # Déphasage propre à chaque sujet et à chaque canal
        phases = rng.uniform(0.0, 2 * np.pi, size=(channels, 1))
        series = np.sin(2 * np.pi * freq * t[None, :] + phases)
        series = series + rng.normal(0.0, noise_std, size=(channels, samples))
        recordings.append(Recording(f"sub-{i + 1:03d}", label, float(rate_hz), series))
    return recordings
