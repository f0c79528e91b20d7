#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Vérification des gradients
--------------------------
Ce module compare les gradients obtenus par la bande de calcul aux différences
finies centrées, coordonnée par coordonnée.
"""

import logging

import numpy as np

from functions.errors import NumericError, ParameterError
from functions.numerics.tensor import no_recording, recording

logger = logging.getLogger(__name__)

ABS_FLOOR = 1e-8


def _as_list(theta):
    if isinstance(theta, dict):
        return list(theta.values())
    if hasattr(theta, "tensors"):
        return list(theta.tensors.values())
    return list(theta)


def _evaluate(f, theta):
    with no_recording():
        value = float(np.asarray(f(theta).data).reshape(-1)[0])
    if not np.isfinite(value):
        raise NumericError(f"check_gradients: f non finie ({value})")
    return value


def check_gradients(f, theta, eps=1e-6, n_coords=None, seed=0, abs_floor=ABS_FLOOR):
    """
    Compare le gradient en mode inverse aux différences finies centrées
    (f(θ+εeᵢ) − f(θ−εeᵢ)) / 2ε.

    L'erreur d'une coordonnée vaut |a − n| / max(|a|, |n|), et 0 lorsque
    |a − n| ne dépasse pas le plancher absolu.

    Args:
        f (callable): f(theta) -> Tensor scalaire
        theta (dict | list | ParameterSet): Paramètres (tenseurs avec requires_grad)
        eps (float): Pas des différences finies, dans [1e-7, 1e-3]
        n_coords (int, optional): Nombre de coordonnées tirées au hasard. Par défaut toutes.
        seed (int): Graine du tirage des coordonnées
        abs_floor (float): Plancher absolu

    Returns:
        float: Pire erreur relative
    """
    if not 1e-7 <= eps <= 1e-3:
        raise ParameterError(f"check_gradients: eps={eps} hors de [1e-7, 1e-3]")
    tensors = [t for t in _as_list(theta) if t.requires_grad]
    for t in tensors:
        t.zero_grad()

    with recording() as tape:
        loss = f(theta)
        if not np.all(np.isfinite(loss.data)):
            raise NumericError("check_gradients: f non finie")
        # f constante: rien n'est enregistré, gradients nuls
        if loss._tape is not None:
            loss.backward()
    analytic = [np.zeros(t.shape) if t.grad is None else np.array(t.grad, dtype=np.float64)
                for t in tensors]
    tape.clear()

    coords = [(k, i) for k, t in enumerate(tensors) for i in range(t.data.size)]
    if n_coords is not None and n_coords < len(coords):
        rng = np.random.default_rng(seed)
        picked = rng.choice(len(coords), size=n_coords, replace=False)
        coords = [coords[p] for p in np.sort(picked)]

    worst = 0.0
    for k, i in coords:
        data = tensors[k].data
        saved = data.flat[i]
        data.flat[i] = saved + eps
        f_plus = _evaluate(f, theta)
        data.flat[i] = saved - eps
        f_minus = _evaluate(f, theta)
        data.flat[i] = saved
        numeric = (f_plus - f_minus) / (2.0 * eps)
        exact = analytic[k].reshape(-1)[i]
        diff = abs(exact - numeric)
        if diff <= abs_floor:
            continue
        worst = max(worst, diff / max(abs(exact), abs(numeric)))
    logger.debug("check_gradients: %d coordonnées, erreur max %.3e", len(coords), worst)
    return worst
