#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Gestionnaire des augmentations
------------------------------
Ce module contient la configuration des augmentations et le gestionnaire qui
retrouve les fonctions du module augmentations, garde la liste des augmentations
actives et les applique à un segment ou à un lot.
"""

import inspect
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from config.model_config import AUG_PROB, AUG_RATIO, AUG_SCALE, AUGMENTATION_KINDS, DEFAULT_AUGMENTATIONS
from functions.augmentation import augmentations
from functions.errors import ConfigError


@dataclass(frozen=True)
class AugmentationConfig:
    """Augmentations actives et leurs intensités."""

    kinds: Tuple[str, ...] = DEFAULT_AUGMENTATIONS
    prob: float = AUG_PROB
    ratio: float = AUG_RATIO
    scale: float = AUG_SCALE
    rng_seed: int = 0
    shared_draw: bool = False

    def __post_init__(self):
        unknown = [k for k in self.kinds if k not in AUGMENTATION_KINDS]
        if unknown:
            raise ConfigError("augmentation inconnue", key="augmentations", value=",".join(unknown),
                              constraint=f"parmi {','.join(AUGMENTATION_KINDS)}")
        if not 0.0 <= self.prob <= 1.0:
            raise ConfigError("probabilité invalide", key="aug_prob", value=self.prob, constraint="dans [0, 1]")
        if not 0.0 <= self.ratio < 1.0:
            raise ConfigError("proportion invalide", key="aug_ratio", value=self.ratio, constraint="dans [0, 1)")
        if self.scale <= 0:
            raise ConfigError("amplitude invalide", key="aug_scale", value=self.scale, constraint="> 0")


def parse_kinds(text):
    """
    Lit une liste d'augmentations séparées par des virgules.

    Args:
        text (str): Par exemple "flip,jitter" (chaîne vide ou "none": aucune)

    Returns:
        tuple: Noms des augmentations
    """
    text = (text or "").strip()
    if text.lower() in ("", "none"):
        return ()
    return tuple(part.strip() for part in text.split(",") if part.strip())


class AugmentationManager:
    """
    Gestionnaire des augmentations.
    Gère l'état d'activation des augmentations et leur application dans l'ordre canonique.
    """

    def __init__(self, config):
        """
        Initialise le gestionnaire.

        Args:
            config (AugmentationConfig): Configuration des augmentations
        """
        self.config = config
        self.augmentations = self._get_augmentations()
        self.active = dict.fromkeys(AUGMENTATION_KINDS, False)
        for name in config.kinds:
            self.toggle(name, True)

    def _get_augmentations(self):
        """
        Récupère toutes les fonctions publiques du module augmentations.

        Returns:
            dict: Dictionnaire nom -> fonction
        """
        functions = {}
        for name, obj in inspect.getmembers(augmentations):
            if inspect.isfunction(obj) and not name.startswith("_") and name in AUGMENTATION_KINDS:
                functions[name] = obj
        return functions

    def toggle(self, name, state):
        """
        Active ou désactive une augmentation.

        Args:
            name (str): Nom de l'augmentation
            state (bool): Nouvel état
        """
        if name in self.active:
            self.active[name] = state

    def get_active_names(self):
        """Noms des augmentations actives, dans l'ordre canonique."""
        return [name for name in AUGMENTATION_KINDS if self.active[name]]

    def _intensity(self, name):
        if name == "flip":
            return self.config.prob
        if name == "jitter":
            return self.config.scale
        return self.config.ratio

    def apply(self, seg, rng):
        """
        Applique les augmentations actives à un segment.

        Args:
            seg (ndarray): Segment T×C
            rng (numpy.random.Generator): Générateur aléatoire

        Returns:
            ndarray: Vue augmentée
        """
        out = seg
        for name in self.get_active_names():
            out = self.augmentations[name](out, self._intensity(name), rng)
        return out

    def apply_batch(self, X, rng):
        """
        Applique les augmentations à chaque segment d'un lot, avec des tirages indépendants.

        Args:
            X (ndarray): Lot [B, T, C]
            rng (numpy.random.Generator): Générateur aléatoire

        Returns:
            ndarray: Lot augmenté
        """
        if not self.get_active_names():
            return X
        return np.stack([self.apply(x, rng) for x in X])
