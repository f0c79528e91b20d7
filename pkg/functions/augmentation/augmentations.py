#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Fonctions d'augmentation
------------------------
Ce module contient les six augmentations appliquées aux échantillons T×C avant
l'embedding: retournement temporel, masquage temporel, fréquentiel et de canaux,
bruit uniforme et abandon de valeurs.
Chaque fonction reçoit le segment, son paramètre d'intensité et un générateur
aléatoire, et retourne un nouveau tableau de même forme.
"""

import numpy as np

from functions.numerics.spectral import dft, idft
from functions.preprocessing.filters import round_half_up


def _rng(rng):
    return rng if rng is not None else np.random.default_rng()


def flip(seg, prob, rng=None):
    """
    Retourne l'axe du temps avec une probabilité prob.

    Args:
        seg (ndarray): Segment T×C
        prob (float): Probabilité du retournement
        rng (numpy.random.Generator, optional): Générateur aléatoire

    Returns:
        ndarray: Segment éventuellement retourné
    """
    if prob <= 0:
        return seg.copy()
    if prob >= 1 or _rng(rng).random() < prob:
        return seg[::-1].copy()
    return seg.copy()


def mask_time(seg, ratio, rng=None):
    """
    Met à zéro round(ratio·T) instants, sur tous les canaux.

    Args:
        seg (ndarray): Segment T×C
        ratio (float): Proportion d'instants masqués, dans [0, 1)
        rng (numpy.random.Generator, optional): Générateur aléatoire

    Returns:
        ndarray: Segment masqué
    """
    out = seg.copy()
    count = round_half_up(ratio * seg.shape[0])
    if count:
        rows = _rng(rng).choice(seg.shape[0], size=count, replace=False)
        out[rows, :] = 0.0
    return out


def mask_freq(seg, ratio, rng=None, bins=None):
    """
    Masque des fréquences, canal par canal: DFT, mise à zéro, DFT inverse.
    Les paires conjuguées (k, T−k) sont masquées ensemble pour que la sortie reste réelle.

    Args:
        seg (ndarray): Segment T×C
        ratio (float): Proportion des fréquences masquées, dans [0, 1)
        rng (numpy.random.Generator, optional): Générateur aléatoire
        bins (iterable, optional): Fréquences à masquer (mêmes pour tous les canaux),
            à la place du tirage aléatoire

    Returns:
        ndarray: Segment filtré (réel)
    """
    T, C = seg.shape
    groups = T // 2 + 1  # 0, 1, ..., T//2: une fréquence et sa conjuguée
    count = round_half_up(ratio * groups)
    if bins is None and count == 0:
        return seg.copy()
    spectrum = dft(seg, axis=0)
    rng = _rng(rng)
    for c in range(C):
        chosen = np.asarray(list(bins)) if bins is not None else rng.choice(groups, size=count, replace=False)
        for k in chosen:
            spectrum[k, c] = 0.0
            spectrum[(T - k) % T, c] = 0.0
    return idft(spectrum, axis=0, real=True)


def mask_channel(seg, ratio, rng=None):
    """
    Met à zéro round(ratio·C) canaux sur toute la durée.

    Args:
        seg (ndarray): Segment T×C
        ratio (float): Proportion de canaux masqués, dans [0, 1)
        rng (numpy.random.Generator, optional): Générateur aléatoire

    Returns:
        ndarray: Segment masqué
    """
    out = seg.copy()
    count = round_half_up(ratio * seg.shape[1])
    if count:
        channels = _rng(rng).choice(seg.shape[1], size=count, replace=False)
        out[:, channels] = 0.0
    return out


def jitter(seg, scale, rng=None):
    """
    Ajoute un bruit uniforme scale·U, U ~ U[0, 1).

    Args:
        seg (ndarray): Segment T×C
        scale (float): Amplitude du bruit
        rng (numpy.random.Generator, optional): Générateur aléatoire

    Returns:
        ndarray: Segment bruité
    """
    if scale == 0:
        return seg.copy()
    return seg + scale * _rng(rng).random(seg.shape)


def dropout(seg, ratio, rng=None):
    """
    Met à zéro chaque valeur indépendamment avec une probabilité ratio.
    Les valeurs conservées ne sont pas remises à l'échelle.

    Args:
        seg (ndarray): Segment T×C
        ratio (float): Probabilité d'abandon, dans [0, 1)
        rng (numpy.random.Generator, optional): Générateur aléatoire

    Returns:
        ndarray: Segment avec valeurs abandonnées
    """
    if ratio == 0:
        return seg.copy()
    out = seg.copy()
    out[_rng(rng).random(seg.shape) < ratio] = 0.0
    return out
