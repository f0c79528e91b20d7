#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Optimiseur
----------
AdamW (décroissance des poids découplée), écrêtage optionnel du gradient et
calendrier cosinus du taux d'apprentissage.
"""

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from config.training_config import ADAM_EPS, BETAS, WEIGHT_DECAY
from functions.errors import DimensionError, ParameterError, TrainingError


@dataclass
class AdamState:
    """Moments d'ordre 1 et 2 par paramètre et compteur de pas."""

    betas: Tuple[float, float] = BETAS
    eps: float = ADAM_EPS
    weight_decay: float = WEIGHT_DECAY
    step: int = 0
    m: Dict[str, np.ndarray] = field(default_factory=dict)
    v: Dict[str, np.ndarray] = field(default_factory=dict)


def _tensors(params):
    return params.tensors if hasattr(params, "tensors") else params


def adamw_step(params, grads, state, lr):
    """
    Un pas AdamW:
    m ← β1·m + (1−β1)·g, v ← β2·v + (1−β2)·g², correction du biais, puis
    θ ← θ − lr·m̂/(√v̂ + eps) − lr·wd·θ.

    Args:
        params (ParameterSet | dict): Nom -> Tensor (mis à jour en place)
        grads (dict): Nom -> gradient
        state (AdamState): État de l'optimiseur (mis à jour en place)
        lr (float): Taux d'apprentissage

    Returns:
        AdamState: L'état mis à jour

    Raises:
        TrainingError: Gradient non fini (noms des paramètres en cause)
    """
    tensors = _tensors(params)
    bad = [name for name, g in grads.items() if not np.all(np.isfinite(g))]
    if bad:
        raise TrainingError(f"gradient non fini au pas {state.step + 1}", parameters=bad)
    beta1, beta2 = state.betas
    state.step += 1
    correction1 = 1.0 - beta1 ** state.step
    correction2 = 1.0 - beta2 ** state.step
    for name, tensor in tensors.items():
        g = grads.get(name)
        if g is None:
            continue
        if g.shape != tensor.shape:
            raise DimensionError(f"{name}: gradient {g.shape}, paramètre {tensor.shape}")
        m = state.m.get(name, np.zeros_like(tensor.data))
        v = state.v.get(name, np.zeros_like(tensor.data))
        m = beta1 * m + (1.0 - beta1) * g
        v = beta2 * v + (1.0 - beta2) * g * g
        state.m[name], state.v[name] = m, v
        update = (m / correction1) / (np.sqrt(v / correction2) + state.eps)
        tensor.data = (tensor.data - lr * update - lr * state.weight_decay * tensor.data).astype(tensor.dtype)
    return state


def global_norm(grads):
    return float(np.sqrt(sum(float(np.sum(g * g)) for g in grads.values())))


def clip_gradients(grads, max_norm):
    """
    Écrête les gradients par leur norme L2 globale.

    Args:
        grads (dict): Nom -> gradient
        max_norm (float | None): Norme maximale (None: pas d'écrêtage)

    Returns:
        tuple: (gradients, norme avant écrêtage)
    """
    norm = global_norm(grads)
    if max_norm is None or norm <= max_norm:
        return grads, norm
    scale = max_norm / norm
    return {name: g * scale for name, g in grads.items()}, norm


def cosine_lr(t, t_max, lr_max, lr_min=0.0):
    """
    Recuit cosinus: lr_min + ½(lr_max − lr_min)(1 + cos(π·t/t_max)).

    Args:
        t (int): Époque courante, 0 ≤ t ≤ t_max
        t_max (int): Nombre d'époques de la période
        lr_max (float): Taux initial
        lr_min (float): Taux final

    Returns:
        float: Taux d'apprentissage
    """
    if t_max <= 0:
        return float(lr_max)
    if not 0 <= t <= t_max:
        raise ParameterError(f"époque {t} hors de [0, {t_max}]")
    return float(lr_min + 0.5 * (lr_max - lr_min) * (1.0 + np.cos(np.pi * t / t_max)))
