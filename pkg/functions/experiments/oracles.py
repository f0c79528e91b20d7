#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Vérification du gradient de bout en bout
----------------------------------------
Compare, sur un modèle minuscule en 64 bits et sans augmentation, le gradient
de la perte obtenu par la bande de calcul aux différences finies centrées.
"""

import logging
import time

import numpy as np

from functions.augmentation.augmentation_manager import AugmentationConfig
from functions.model.adformer import ModelConfig, forward, init_parameters, loss
from functions.model.embedding import GranularitySpec
from functions.numerics.gradcheck import check_gradients

logger = logging.getLogger(__name__)

TINY_CHANNELS = 4
TINY_WINDOW = 16
TINY_SPEC = GranularitySpec(patch_lengths=(2, 4), scaled_channels=(4, 8), model_dim=8)


def tiny_model_config(ablation="full"):
    """Modèle C=4, T=16, D=8, H=2, M=1, n=2, m=2, K=2, sans augmentation."""
    return ModelConfig(spec=TINY_SPEC, channels=TINY_CHANNELS, window_len=TINY_WINDOW, layers=1, heads=2,
                       d_ff=16, classes=2, ablation=ablation, augmentation=AugmentationConfig(kinds=()))


def tiny_model_gradcheck(seed=0, n_coords=200, batch=3, eps=1e-5, ablation="full"):
    """
    Erreur relative maximale entre gradient inverse et différences finies.

    Args:
        seed (int): Graine (paramètres, données, coordonnées tirées)
        n_coords (int): Nombre de coordonnées comparées
        batch (int): Taille du lot de la perte
        eps (float): Pas des différences finies
        ablation (str): Variante du modèle

    Returns:
        tuple: (erreur maximale, durée en secondes)
    """
    config = tiny_model_config(ablation)
    params = init_parameters(config, seed)
    rng = np.random.default_rng(seed)
    # Routeurs et biais initialisés à des valeurs non triviales
    for tensor in params.tensors.values():
        tensor.data = tensor.data + rng.normal(0.0, 0.1, size=tensor.shape)
    x = rng.normal(size=(batch, TINY_WINDOW, TINY_CHANNELS))
    labels = rng.integers(0, config.classes, size=batch)

    start = time.perf_counter()
    error = check_gradients(lambda p: loss(forward(x, config, p), labels), params,
                            eps=eps, n_coords=n_coords, seed=seed)
    elapsed = time.perf_counter() - start
    logger.info("vérification du gradient: erreur relative max %.3e sur %d coordonnées (%.1f s)",
                error, n_coords, elapsed)
    return error, elapsed
