#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Ensemble de paramètres
----------------------
Ce module contient le conteneur des paramètres nommés du modèle (tenseurs
entraînables et tables fixes) et les règles d'initialisation.
"""

from collections import OrderedDict

import numpy as np

from config.model_config import GRANULARITY_INIT_STD
from functions.numerics.tensor import Tensor


class ParameterSet:
    """
    Paramètres nommés, dans un ordre d'insertion stable.
    Les tenseurs entraînables reçoivent un gradient, les tables fixes (buffers) jamais.
    """

    def __init__(self):
        """Initialise un ensemble vide."""
        self.tensors = OrderedDict()
        self.buffers = OrderedDict()

    def __getitem__(self, name):
        return self.tensors[name]

    def __contains__(self, name):
        return name in self.tensors

    def __len__(self):
        return len(self.tensors)

    def add(self, name, array):
        """
        Ajoute un paramètre entraînable.

        Args:
            name (str): Nom du paramètre
            array (ndarray): Valeurs initiales

        Returns:
            Tensor: Le paramètre
        """
        tensor = Tensor(np.ascontiguousarray(array), requires_grad=True)
        self.tensors[name] = tensor
        return tensor

    def names(self):
        return list(self.tensors)

    def zero_grad(self):
        for tensor in self.tensors.values():
            tensor.zero_grad()

    def grads(self):
        """Gradients courants (zéros pour les paramètres non atteints)."""
        return OrderedDict((name, t.grad if t.grad is not None else np.zeros_like(t.data))
                           for name, t in self.tensors.items())

    def state(self):
        """Copie des valeurs de tous les paramètres entraînables."""
        return OrderedDict((name, t.data.copy()) for name, t in self.tensors.items())

    def load_state(self, state):
        """
        Recharge des valeurs (noms et formes doivent correspondre).

        Args:
            state (dict): Nom -> valeurs
        """
        missing = set(self.tensors) ^ set(state)
        if missing:
            raise KeyError(f"paramètres non concordants: {sorted(missing)}")
        for name, tensor in self.tensors.items():
            values = np.asarray(state[name], dtype=tensor.data.dtype)
            if values.shape != tensor.shape:
                raise ValueError(f"{name}: forme {values.shape}, attendu {tensor.shape}")
            tensor.data = values.copy()

    def count(self):
        return int(sum(t.data.size for t in self.tensors.values()))


def xavier_uniform(rng, shape, dtype=np.float64):
    """
    Initialisation de Xavier (uniforme) d'une matrice.

    Args:
        rng (numpy.random.Generator): Générateur aléatoire
        shape (tuple): Forme (fan_in, fan_out)
        dtype (numpy.dtype): Type des valeurs

    Returns:
        ndarray: Valeurs initiales
    """
    fan_in, fan_out = shape[0], shape[-1]
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


def initial_value(name, shape, rng, dtype=np.float64):
    """
    Valeur initiale d'un paramètre selon son rôle (suffixe du nom).

    Args:
        name (str): Nom du paramètre
        shape (tuple): Forme
        rng (numpy.random.Generator): Générateur aléatoire
        dtype (numpy.dtype): Type des valeurs

    Returns:
        ndarray: Valeurs initiales
    """
    leaf = name.rsplit(".", 1)[-1]
    if leaf == "gr":
        return rng.normal(0.0, GRANULARITY_INIT_STD, size=shape).astype(dtype)
    if leaf == "gamma":
        return np.ones(shape, dtype=dtype)
    if leaf == "beta" or leaf.startswith("b"):
        return np.zeros(shape, dtype=dtype)
    return xavier_uniform(rng, shape, dtype)
