#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Embedding multi-granularité
---------------------------
Ce module construit les jetons des deux branches:

- branche temporelle: pour chaque longueur de patch L_i, l'échantillon est découpé
  en patchs de L_i instants sur tous les canaux, projetés en dimension D, auxquels on
  ajoute la table de position fixe et l'embedding de granularité W_gr^(i);
  le routeur vaut W_pos[N_i+1] + W_gr^(i);
- branche spatiale: pour chaque nombre de canaux F_j, la série transposée (plus la
  table de position des canaux) est portée à F_j canaux par W1^(j), chaque série
  entière est projetée par W2^(j), puis on ajoute W_gr^(j); le routeur vaut W_gr^(j).
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from functions.errors import ConfigError, DimensionError
from functions.numerics.tensor import Tensor, add, broadcast_to, matmul, reshape

TEMPORAL = "temporal"
SPATIAL = "spatial"


@dataclass(frozen=True)
class GranularitySpec:
    """Longueurs de patch {L_i}, nombres de canaux {F_j}, dimension D et taille G de la table."""

    patch_lengths: Tuple[int, ...]
    scaled_channels: Tuple[int, ...]
    model_dim: int
    pos_table_size: Optional[int] = None

    def __post_init__(self):
        if self.model_dim < 1:
            raise ConfigError("dimension invalide", key="model_dim", value=self.model_dim, constraint=">= 1")
        if any(L < 1 for L in self.patch_lengths):
            raise ConfigError("longueur de patch invalide", key="patch_len_list",
                              value=self.patch_lengths, constraint="entiers >= 1")
        if any(F < 1 for F in self.scaled_channels):
            raise ConfigError("nombre de canaux invalide", key="scaled_channels",
                              value=self.scaled_channels, constraint="entiers >= 1")

    def token_counts(self, window_len):
        """Nombre de jetons N_i = ceil(T/L_i) de chaque granularité temporelle."""
        return [-(-window_len // L) for L in self.patch_lengths]

    def table_size(self, window_len):
        """Taille G de la table de position (au moins max N_i + 1)."""
        needed = max(self.token_counts(window_len), default=0) + 1
        if self.pos_table_size is None:
            return needed
        if self.pos_table_size < needed:
            raise ConfigError("table de position trop petite", key="pos_table_size",
                              value=self.pos_table_size, constraint=f">= {needed} pour T={window_len}")
        return self.pos_table_size


@dataclass
class TokenSet:
    """Jetons d'une granularité [B, N, D] et son routeur [B, 1, D]."""

    tokens: Tensor
    router: Tensor
    granularity_id: int
    branch: str

    @property
    def count(self):
        return self.tokens.shape[1]


def _batched(x):
    x = np.asarray(x)
    return x[None] if x.ndim == 2 else x


def patch_partition(seg, L):
    """
    Découpe en patchs non recouvrants de L instants sur tous les canaux.
    L'axe du temps est complété par des zéros jusqu'à ceil(T/L)·L; dans un patch,
    les valeurs sont rangées instant par instant, canaux entrelacés.

    Args:
        seg (ndarray): Segment [T, C] ou lot [B, T, C]
        L (int): Longueur de patch

    Returns:
        ndarray: Patchs [N, L·C] ou [B, N, L·C]
    """
    seg = np.asarray(seg)
    T, C = seg.shape[-2:]
    N = -(-T // L)
    pad = N * L - T
    if pad:
        widths = [(0, 0)] * (seg.ndim - 2) + [(0, pad), (0, 0)]
        seg = np.pad(seg, widths)
    return seg.reshape(seg.shape[:-2] + (N, L * C))


def _augmented(x, train_mode, rng, augmenter):
    if train_mode and augmenter is not None:
        return augmenter.apply_batch(x, rng)
    return x


def embed_temporal(x, i, spec, params, train_mode=False, rng=None, augmenter=None):
    """
    Embedding des patchs de la granularité temporelle i.

    Args:
        x (ndarray): Segment [T, C] ou lot [B, T, C]
        i (int): Indice de granularité
        spec (GranularitySpec): Granularités
        params (ParameterSet): Paramètres (temporal.embed.i.*) et table pos.temporal
        train_mode (bool): Applique les augmentations
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations

    Returns:
        TokenSet: N_i jetons et un routeur
    """
    x = _augmented(_batched(x), train_mode, rng, augmenter)
    B = x.shape[0]
    D = spec.model_dim
    L = spec.patch_lengths[i]
    proj = params[f"temporal.embed.{i}.proj"]
    gr = params[f"temporal.embed.{i}.gr"]
    patches = patch_partition(x, L).astype(proj.dtype, copy=False)
    if patches.shape[-1] != proj.shape[0] or proj.shape[1] != D:
        raise DimensionError(f"embed_temporal: patchs {patches.shape} et projection {proj.shape}")
    N = patches.shape[1]
    pos = params.buffers["pos.temporal"]
    tokens = add(add(matmul(Tensor(patches), proj), Tensor(pos[:N])), gr)
    router = add(Tensor(pos[N:N + 1]), gr)
    router = broadcast_to(reshape(router, (1, 1, D)), (B, 1, D))
    return TokenSet(tokens, router, i, TEMPORAL)


def embed_spatial(x, j, spec, params, train_mode=False, rng=None, augmenter=None):
    """
    Embedding des séries entières de la granularité spatiale j.

    Args:
        x (ndarray): Segment [T, C] ou lot [B, T, C]
        j (int): Indice de granularité
        spec (GranularitySpec): Granularités
        params (ParameterSet): Paramètres (spatial.embed.j.*) et table pos.spatial
        train_mode (bool): Applique les augmentations
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations

    Returns:
        TokenSet: F_j jetons et un routeur
    """
    x = _augmented(_batched(x), train_mode, rng, augmenter)
    B, T, C = x.shape
    D = spec.model_dim
    w1 = params[f"spatial.embed.{j}.w1"]
    w2 = params[f"spatial.embed.{j}.w2"]
    gr = params[f"spatial.embed.{j}.gr"]
    if w1.shape[1] != C or w2.shape[0] != T or w2.shape[1] != D:
        raise DimensionError(f"embed_spatial: entrée {x.shape}, W1 {w1.shape}, W2 {w2.shape}")
    pos = params.buffers["pos.spatial"]
    x_trans = np.swapaxes(x, 1, 2) + pos[:C, :T]
    x_c = matmul(w1, Tensor(x_trans.astype(w1.dtype, copy=False)))
    tokens = add(matmul(x_c, w2), gr)
    router = broadcast_to(reshape(gr, (1, 1, D)), (B, 1, D))
    return TokenSet(tokens, router, j, SPATIAL)


def build_all(x, spec, params, train_mode=False, rng=None, augmenter=None,
              temporal=True, spatial=True):
    """
    Construit les jetons de toutes les granularités: temporelles puis spatiales.
    Chaque granularité reçoit son propre tirage d'augmentation, sauf si la
    configuration demande un tirage partagé.

    Args:
        x (ndarray): Segment [T, C] ou lot [B, T, C]
        spec (GranularitySpec): Granularités
        params (ParameterSet): Paramètres
        train_mode (bool): Applique les augmentations
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations
        temporal (bool): Branche temporelle active
        spatial (bool): Branche spatiale active

    Returns:
        list: TokenSet, n temporels puis m spatiaux
    """
    x = _batched(x)
    if train_mode and augmenter is not None and augmenter.config.shared_draw:
        x = augmenter.apply_batch(x, rng)
        train_mode = False
    tokensets = []
    if temporal:
        tokensets += [embed_temporal(x, i, spec, params, train_mode, rng, augmenter)
                      for i in range(len(spec.patch_lengths))]
    if spatial:
        tokensets += [embed_spatial(x, j, spec, params, train_mode, rng, augmenter)
                      for j in range(len(spec.scaled_channels))]
    return tokensets
