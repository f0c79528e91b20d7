#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Attention intra/inter-granularité
---------------------------------
Ce module contient l'attention en deux étapes avec routeurs:

- intra-granularité: les jetons d'une granularité et son routeur s'attendent
  mutuellement (mêmes projections pour les jetons et le routeur);
- inter-granularité: les routeurs de toutes les granularités d'une branche
  s'attendent entre eux, les jetons ne sont pas touchés.

Les deux étapes et le réseau feed-forward forment une couche d'encodeur
(post-normalisation). Un compteur des entrées des matrices de scores permet de
vérifier le coût Σ(N_i+1)² + n² face au coût naïf (ΣN_i + n)².
"""

import logging
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import List

import numpy as np

from config.model_config import LAYER_NORM_EPS
from functions.errors import DimensionError, UsageError
from functions.model.embedding import TokenSet
from functions.numerics.tensor import (
    add, concat, gelu, getitem, layer_norm, matmul, mul, reshape, softmax, swapaxes, transpose,
)

logger = logging.getLogger(__name__)

_local = threading.local()


@dataclass
class CostReport:
    """Nombre d'entrées des matrices de scores, par échantillon et par couche."""

    naive_entries: int
    router_entries: int
    per_granularity: List[int] = field(default_factory=list)
    inter_entries: int = 0

    @property
    def reduction(self):
        return self.naive_entries / self.router_entries if self.router_entries else float("inf")


@dataclass
class ScoreCounter:
    """Compteur instrumenté des entrées de scores calculées par les noyaux d'attention."""

    total: int = 0
    calls: List[tuple] = field(default_factory=list)

    def add(self, rows, cols):
        self.total += rows * cols
        self.calls.append((rows, cols))


@contextmanager
def count_scores():
    """
    Active le comptage des entrées de scores pour le fil d'exécution courant.
    Chaque appel d'attention compte lignes × colonnes une fois (par échantillon,
    indépendamment du lot et du nombre de têtes).

    Yields:
        ScoreCounter: Le compteur
    """
    counter = ScoreCounter()
    previous = getattr(_local, "counter", None)
    _local.counter = counter
    try:
        yield counter
    finally:
        _local.counter = previous


def attention_cost(spec, window_len, branch="temporal", use_inter=True):
    """
    Coût théorique de l'attention d'une branche.

    Args:
        spec (GranularitySpec): Granularités
        window_len (int): Longueur T des échantillons
        branch (str): "temporal" (N_i = ceil(T/L_i)) ou "spatial" (N_j = F_j)
        use_inter (bool): Étape inter-granularité active

    Returns:
        CostReport: Entrées naïves (ΣN_i + n)² et avec routeurs Σ(N_i+1)² + n²
    """
    counts = spec.token_counts(window_len) if branch == "temporal" else list(spec.scaled_channels)
    n = len(counts)
    per_granularity = [(N + 1) ** 2 for N in counts]
    inter = n * n if use_inter else 0
    return CostReport(naive_entries=(sum(counts) + n) ** 2,
                      router_entries=sum(per_granularity) + inter,
                      per_granularity=per_granularity,
                      inter_entries=inter)


def _linear(x, params, prefix, name):
    return add(matmul(x, params[f"{prefix}.w{name}"]), params[f"{prefix}.b{name}"])


def _split_heads(x, heads):
    B, N, D = x.shape
    return transpose(reshape(x, (B, N, heads, D // heads)), (0, 2, 1, 3))


def multi_head_attention(queries, keys, params, prefix, heads):
    """
    Attention multi-têtes par produit scalaire, échelle 1/sqrt(D/H).

    Args:
        queries (Tensor): Requêtes [B, Nq, D]
        keys (Tensor): Clés et valeurs [B, Nk, D]
        params (ParameterSet): Paramètres {prefix}.w{q,k,v,o} et {prefix}.b{q,k,v,o}
        prefix (str): Préfixe des paramètres
        heads (int): Nombre de têtes H

    Returns:
        tuple: (sortie [B, Nq, D], poids [B, H, Nq, Nk] en ndarray)
    """
    B, Nq, D = queries.shape
    if D % heads:
        raise DimensionError(f"dimension {D} non divisible par {heads} têtes")
    if params[f"{prefix}.wq"].shape[0] != D:
        raise DimensionError(f"attention: jetons de dimension {D}, projections {params[f'{prefix}.wq'].shape}")
    q = _split_heads(_linear(queries, params, prefix, "q"), heads)
    k = _split_heads(_linear(keys, params, prefix, "k"), heads)
    v = _split_heads(_linear(keys, params, prefix, "v"), heads)
    scores = mul(matmul(q, swapaxes(k)), 1.0 / np.sqrt(D // heads))
    weights = softmax(scores, axis=-1)
    counter = getattr(_local, "counter", None)
    if counter is not None:
        counter.add(Nq, keys.shape[1])
    context = reshape(transpose(matmul(weights, v), (0, 2, 1, 3)), (B, Nq, D))
    return _linear(context, params, prefix, "o"), weights.data


def _join(ts):
    return concat([ts.tokens, ts.router], axis=1)


def _split(z, ts):
    N = ts.count
    return TokenSet(getitem(z, (slice(None), slice(0, N))), getitem(z, (slice(None), slice(N, N + 1))),
                    ts.granularity_id, ts.branch)


def intra_attention(ts, params, prefix, heads):
    """
    Attention intra-granularité: z = [jetons ‖ routeur], chaque ligne de z attend sur z.

    Args:
        ts (TokenSet): Jetons et routeur d'une granularité
        params (ParameterSet): Paramètres
        prefix (str): Préfixe des projections (par ex. "temporal.layer0.intra")
        heads (int): Nombre de têtes

    Returns:
        TokenSet: Sorties de l'attention, mêmes formes
    """
    z = _join(ts)
    out, _ = multi_head_attention(z, z, params, prefix, heads)
    return _split(out, ts)


def inter_attention(routers, params, prefix, heads):
    """
    Attention inter-granularité: chaque routeur attend sur la suite U des routeurs.

    Args:
        routers (Tensor): U [B, n, D]
        params (ParameterSet): Paramètres
        prefix (str): Préfixe des projections (par ex. "temporal.layer0.inter")
        heads (int): Nombre de têtes

    Returns:
        Tensor: Routeurs mis à jour [B, n, D]
    """
    out, _ = multi_head_attention(routers, routers, params, prefix, heads)
    return out


def _add_norm(x, y, params, prefix):
    return layer_norm(add(x, y), params[f"{prefix}.gamma"], params[f"{prefix}.beta"], LAYER_NORM_EPS)


def feed_forward(x, params, prefix):
    """Réseau feed-forward D -> d_ff -> D avec activation GELU."""
    hidden = gelu(add(matmul(x, params[f"{prefix}.w1"]), params[f"{prefix}.b1"]))
    return add(matmul(hidden, params[f"{prefix}.w2"]), params[f"{prefix}.b2"])


def encoder_layer(tokensets, params, layer, branch, heads, use_inter=True, order=None):
    """
    Couche d'encodeur d'une branche:
    intra-attention -> résidu + norme; inter-attention des routeurs -> résidu + norme;
    feed-forward (jetons et routeurs) -> résidu + norme.

    Args:
        tokensets (list): TokenSet de la branche
        params (ParameterSet): Paramètres
        layer (int): Indice de la couche
        branch (str): "temporal" ou "spatial"
        heads (int): Nombre de têtes
        use_inter (bool): Étape inter-granularité active
        order (list, optional): Ordre de traitement des granularités dans chaque étape

    Returns:
        list: TokenSet de mêmes formes, dans l'ordre d'entrée
    """
    mixed = [ts.branch for ts in tokensets if ts.branch != branch]
    if mixed:
        raise UsageError(f"encoder_layer({branch}): jetons de la branche {mixed[0]}")
    prefix = f"{branch}.layer{layer}"
    order = list(range(len(tokensets))) if order is None else list(order)

    # Intra-granularité
    stage = [None] * len(tokensets)
    for g in order:
        ts = tokensets[g]
        attended = intra_attention(ts, params, f"{prefix}.intra", heads)
        stage[g] = _split(_add_norm(_join(ts), _join(attended), params, f"{prefix}.norm_intra"), ts)

    # Inter-granularité: barrière sur tous les routeurs
    if use_inter:
        routers = concat([ts.router for ts in stage], axis=1)
        mixed_routers = _add_norm(routers, inter_attention(routers, params, f"{prefix}.inter", heads),
                                  params, f"{prefix}.norm_inter")
        stage = [TokenSet(ts.tokens, getitem(mixed_routers, (slice(None), slice(g, g + 1))),
                          ts.granularity_id, ts.branch) for g, ts in enumerate(stage)]

    # Feed-forward partagé par les jetons et les routeurs
    out = [None] * len(stage)
    for g in order:
        z = _join(stage[g])
        out[g] = _split(_add_norm(z, feed_forward(z, params, f"{prefix}.ffn"), params, f"{prefix}.norm_ffn"),
                        stage[g])
    return out
