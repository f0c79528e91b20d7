#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tables de position
------------------
Ce module génère les tables de position sinusoïdales fixes (non entraînées):
la table G×D de la branche temporelle et la table C×T de la branche spatiale.
"""

import numpy as np

from config.model_config import POS_BASE


def sinusoidal_table(rows, width, dtype=np.float64):
    """
    Table sinusoïdale: ligne p, colonnes 2k et 2k+1 -> sin et cos de p / base^(2k/width).

    Args:
        rows (int): Nombre de positions
        width (int): Largeur de chaque ligne
        dtype (numpy.dtype): Type des valeurs

    Returns:
        ndarray: Table rows×width
    """
    position = np.arange(rows, dtype=np.float64)[:, None]
    even = np.arange(0, width, 2, dtype=np.float64)
    freqs = np.exp(-np.log(POS_BASE) * even / width)
    table = np.zeros((rows, width), dtype=np.float64)
    table[:, 0::2] = np.sin(position * freqs)
    table[:, 1::2] = np.cos(position * freqs)[:, : width // 2]
    return table.astype(dtype)


def generate_positional_tables(spec, window_len, channels, dtype=np.float64):
    """
    Génère les deux tables de position (indépendantes l'une de l'autre).

    Args:
        spec (GranularitySpec): Granularités et dimension du modèle
        window_len (int): Longueur T des échantillons
        channels (int): Nombre de canaux C
        dtype (numpy.dtype): Type des valeurs

    Returns:
        dict: {"pos.temporal": G×D, "pos.spatial": C×T}
    """
    return {
        "pos.temporal": sinusoidal_table(spec.table_size(window_len), spec.model_dim, dtype),
        "pos.spatial": sinusoidal_table(channels, window_len, dtype),
    }
