#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Transformées de Fourier discrètes
---------------------------------
Ce module contient la DFT et son inverse sur l'axe temporel, utilisées par le
masquage fréquentiel et par les mesures de spectre des tests.
"""

import numpy as np


def dft(x, axis=-1):
    """
    Transformée de Fourier discrète d'une série réelle.

    Args:
        x (ndarray): Série réelle de longueur S sur l'axe donné
        axis (int): Axe temporel. Par défaut le dernier.

    Returns:
        ndarray: Spectre complexe de longueur S
    """
    return np.fft.fft(np.asarray(x, dtype=np.float64), axis=axis)


def idft(spectrum, axis=-1, real=False):
    """
    Transformée inverse.

    Args:
        spectrum (ndarray): Spectre complexe de longueur S
        axis (int): Axe des fréquences. Par défaut le dernier.
        real (bool): Ne garder que la partie réelle

    Returns:
        ndarray: Série (complexe, ou réelle si real=True)
    """
    series = np.fft.ifft(spectrum, axis=axis)
    return series.real if real else series


def dominant_frequency(x, rate_hz):
    """
    Fréquence du pic spectral (hors composante continue).

    Args:
        x (ndarray): Série réelle
        rate_hz (float): Fréquence d'échantillonnage

    Returns:
        float: Fréquence du pic en Hz
    """
    x = np.asarray(x, dtype=np.float64)
    magnitude = np.abs(np.fft.rfft(x - x.mean()))
    freqs = np.fft.rfftfreq(x.shape[-1], d=1.0 / rate_hz)
    return float(freqs[1 + np.argmax(magnitude[1:])])
