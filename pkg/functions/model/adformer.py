#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Assemblage du modèle
--------------------
Ce module assemble le transformeur multi-granularité complet:

1. embedding des granularités temporelles et spatiales (build_all);
2. M couches d'encodeur par branche (attention intra puis inter-granularité);
3. concaténation des routeurs finaux en une représentation h de (n+m) lignes;
4. classifieur linéaire vers K scores, entraîné par entropie croisée.

Les variantes d'ablation retirent l'étape inter-granularité ou une branche entière.
"""

import logging
from collections import OrderedDict
from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from config.model_config import ABLATIONS, DEFAULT_PROFILE, PATCH_LEN_LIST, POOLINGS, PROFILES, SCALED_CHANNEL_FACTORS
from functions.augmentation.augmentation_manager import AugmentationConfig, AugmentationManager
from functions.errors import ConfigError
from functions.model.attention import encoder_layer
from functions.model.embedding import SPATIAL, TEMPORAL, GranularitySpec, build_all
from functions.model.parameters import ParameterSet, initial_value
from functions.model.positional import generate_positional_tables
from functions.numerics.tensor import Tensor, add, concat, cross_entropy, matmul, mean, no_recording, reshape, softmax

logger = logging.getLogger(__name__)

ATTENTION_PARTS = ("wq", "wk", "wv", "wo", "bq", "bk", "bv", "bo")


@dataclass(frozen=True)
class ModelConfig:
    """Hyperparamètres du modèle et variante d'ablation."""

    spec: GranularitySpec
    channels: int
    window_len: int
    layers: int = 4
    heads: int = 8
    d_ff: int = 128
    classes: int = 2
    ablation: str = "full"
    augmentation: AugmentationConfig = field(default_factory=AugmentationConfig)
    pooling: str = "flatten"
    dtype: str = "float64"

    def __post_init__(self):
        if self.ablation not in ABLATIONS:
            raise ConfigError("ablation inconnue", key="ablation", value=self.ablation,
                              constraint=f"parmi {','.join(ABLATIONS)}")
        if self.pooling not in POOLINGS:
            raise ConfigError("agrégation inconnue", key="pooling", value=self.pooling,
                              constraint=f"parmi {','.join(POOLINGS)}")
        for key in ("channels", "window_len", "layers", "heads", "d_ff"):
            if getattr(self, key) < 1:
                raise ConfigError("valeur invalide", key=key, value=getattr(self, key), constraint=">= 1")
        if self.classes < 2:
            raise ConfigError("nombre de classes invalide", key="classes", value=self.classes, constraint=">= 2")
        if self.spec.model_dim % self.heads:
            raise ConfigError("têtes incompatibles", key="heads", value=self.heads,
                              constraint=f"diviseur de model_dim={self.spec.model_dim}")
        if self.ablation == "no_temporal" and not self.spec.scaled_channels:
            raise ConfigError("branche spatiale vide", key="ablation", value=self.ablation,
                              constraint="no_temporal exige au moins une granularité spatiale")
        if self.ablation == "no_spatial" and not self.spec.patch_lengths:
            raise ConfigError("branche temporelle vide", key="ablation", value=self.ablation,
                              constraint="no_spatial exige au moins une granularité temporelle")
        if self.use_temporal and not self.spec.patch_lengths and self.use_spatial and not self.spec.scaled_channels:
            raise ConfigError("aucune granularité", key="patch_len_list", value=(), constraint="au moins une")
        if self.dtype not in ("float64", "float32"):
            raise ConfigError("type invalide", key="dtype", value=self.dtype, constraint="float64 ou float32")
        self.spec.table_size(self.window_len)

    @property
    def use_temporal(self):
        return self.ablation != "no_temporal" and bool(self.spec.patch_lengths)

    @property
    def use_spatial(self):
        return self.ablation != "no_spatial" and bool(self.spec.scaled_channels)

    @property
    def use_inter(self):
        return self.ablation != "no_inter"

    @property
    def branches(self):
        active = []
        if self.use_temporal:
            active.append(TEMPORAL)
        if self.use_spatial:
            active.append(SPATIAL)
        return active

    @property
    def router_rows(self):
        """Nombre de lignes de h: n + m, ou n, ou m selon l'ablation."""
        rows = len(self.spec.patch_lengths) if self.use_temporal else 0
        return rows + (len(self.spec.scaled_channels) if self.use_spatial else 0)

    @property
    def np_dtype(self):
        return np.dtype(self.dtype)

    def with_ablation(self, ablation):
        return replace(self, ablation=ablation)

    def to_dict(self):
        """Valeurs à plat, pour l'écho de provenance et le manifeste des points de reprise."""
        aug = self.augmentation
        return OrderedDict([
            ("patch_len_list", list(self.spec.patch_lengths)),
            ("scaled_channels", list(self.spec.scaled_channels)),
            ("model_dim", self.spec.model_dim),
            ("pos_table_size", self.spec.pos_table_size),
            ("channels", self.channels),
            ("window_len", self.window_len),
            ("layers", self.layers),
            ("heads", self.heads),
            ("d_ff", self.d_ff),
            ("classes", self.classes),
            ("ablation", self.ablation),
            ("pooling", self.pooling),
            ("dtype", self.dtype),
            ("augmentations", list(aug.kinds)),
            ("aug_prob", aug.prob),
            ("aug_ratio", aug.ratio),
            ("aug_scale", aug.scale),
            ("aug_seed", aug.rng_seed),
            ("shared_augmentation", aug.shared_draw),
        ])

    @classmethod
    def from_dict(cls, values):
        """Reconstruit une configuration depuis to_dict()."""
        spec = GranularitySpec(tuple(values["patch_len_list"]), tuple(values["scaled_channels"]),
                               int(values["model_dim"]), values.get("pos_table_size"))
        augmentation = AugmentationConfig(tuple(values["augmentations"]), float(values["aug_prob"]),
                                          float(values["aug_ratio"]), float(values["aug_scale"]),
                                          int(values["aug_seed"]), bool(values["shared_augmentation"]))
        return cls(spec=spec, channels=int(values["channels"]), window_len=int(values["window_len"]),
                   layers=int(values["layers"]), heads=int(values["heads"]), d_ff=int(values["d_ff"]),
                   classes=int(values["classes"]), ablation=values["ablation"], augmentation=augmentation,
                   pooling=values["pooling"], dtype=values["dtype"])


def build_model_config(channels, window_len, classes, profile=DEFAULT_PROFILE, patch_lengths=PATCH_LEN_LIST,
                       channel_factors=SCALED_CHANNEL_FACTORS, **overrides):
    """
    Construit une configuration à partir d'un profil prédéfini.

    Args:
        channels (int): Nombre de canaux C
        window_len (int): Longueur T des échantillons
        classes (int): Nombre de classes K
        profile (str): "desk" ou "paper"
        patch_lengths (tuple): Longueurs de patch L_i
        channel_factors (tuple): Multiples de C donnant les F_j
        **overrides: Champs de ModelConfig à remplacer (layers, heads, d_ff, model_dim, ...)

    Returns:
        ModelConfig: La configuration
    """
    if profile not in PROFILES:
        raise ConfigError("profil inconnu", key="profile", value=profile, constraint=f"parmi {','.join(PROFILES)}")
    values = dict(PROFILES[profile])
    values.update({k: v for k, v in overrides.items() if v is not None})
    model_dim = values.pop("model_dim")
    spec = GranularitySpec(tuple(patch_lengths), tuple(int(f * channels) for f in channel_factors), model_dim)
    return ModelConfig(spec=spec, channels=channels, window_len=window_len, classes=classes, **values)


@dataclass
class Representation:
    """Routeurs finaux concaténés h [B, rows, D] (routeurs temporels en premier)."""

    h: Tensor

    @property
    def rows(self):
        return self.h.shape[1]


def parameter_shapes(config):
    """
    Noms et formes de tous les paramètres entraînables, dans l'ordre d'initialisation.

    Args:
        config (ModelConfig): Configuration

    Returns:
        OrderedDict: Nom -> forme
    """
    spec, C, T, D = config.spec, config.channels, config.window_len, config.spec.model_dim
    shapes = OrderedDict()
    if config.use_temporal:
        for i, L in enumerate(spec.patch_lengths):
            shapes[f"temporal.embed.{i}.proj"] = (L * C, D)
            shapes[f"temporal.embed.{i}.gr"] = (D,)
    if config.use_spatial:
        for j, F in enumerate(spec.scaled_channels):
            shapes[f"spatial.embed.{j}.w1"] = (F, C)
            shapes[f"spatial.embed.{j}.w2"] = (T, D)
            shapes[f"spatial.embed.{j}.gr"] = (D,)
    stages = ("intra", "inter") if config.use_inter else ("intra",)
    for branch in config.branches:
        for layer in range(config.layers):
            prefix = f"{branch}.layer{layer}"
            for stage in stages:
                for part in ATTENTION_PARTS:
                    shapes[f"{prefix}.{stage}.{part}"] = (D, D) if part.startswith("w") else (D,)
            shapes[f"{prefix}.ffn.w1"] = (D, config.d_ff)
            shapes[f"{prefix}.ffn.b1"] = (config.d_ff,)
            shapes[f"{prefix}.ffn.w2"] = (config.d_ff, D)
            shapes[f"{prefix}.ffn.b2"] = (D,)
            for norm in [f"norm_{stage}" for stage in stages] + ["norm_ffn"]:
                shapes[f"{prefix}.{norm}.gamma"] = (D,)
                shapes[f"{prefix}.{norm}.beta"] = (D,)
    width = config.router_rows * D if config.pooling == "flatten" else D
    shapes["classifier.w"] = (width, config.classes)
    shapes["classifier.b"] = (config.classes,)
    return shapes


def parameter_census(config):
    """
    Nombre de paramètres par groupe nommé.
    Chaque paramètre d'embedding forme son propre groupe; les paramètres d'attention,
    de feed-forward et de normalisation sont groupés par couche et par étape; le
    classifieur forme un groupe.

    Args:
        config (ModelConfig): Configuration

    Returns:
        OrderedDict: Groupe -> nombre de paramètres
    """
    census = OrderedDict()
    for name, shape in parameter_shapes(config).items():
        if ".embed." in name:
            group = name
        elif name.startswith("classifier."):
            group = "classifier"
        else:
            group = name.rsplit(".", 1)[0]
        census[group] = census.get(group, 0) + int(np.prod(shape))
    return census


def init_parameters(config, seed=0):
    """
    Initialise les paramètres (Xavier, W_gr ~ N(0, 0.02²), normes à l'identité)
    et les tables de position fixes.

    Args:
        config (ModelConfig): Configuration
        seed (int): Graine

    Returns:
        ParameterSet: Paramètres
    """
    rng = np.random.default_rng(seed)
    params = ParameterSet()
    for name, shape in parameter_shapes(config).items():
        params.add(name, initial_value(name, shape, rng, config.np_dtype))
    params.buffers.update(generate_positional_tables(config.spec, config.window_len, config.channels,
                                                     config.np_dtype))
    logger.debug("paramètres initialisés: %d valeurs, %d tenseurs", params.count(), len(params))
    return params


def _check_input(x, config):
    x = np.asarray(x)
    if x.ndim not in (2, 3) or x.shape[-2:] != (config.window_len, config.channels):
        raise ConfigError("segment incompatible", key="window_len/channels", value=x.shape,
                          constraint=f"[B,] {config.window_len}×{config.channels}")
    return x[None] if x.ndim == 2 else x


def encode(x, config, params, train_mode=False, rng=None, augmenter=None, order=None):
    """
    Calcule la représentation h d'un segment ou d'un lot.

    Args:
        x (ndarray): Segment [T, C] ou lot [B, T, C]
        config (ModelConfig): Configuration
        params (ParameterSet): Paramètres
        train_mode (bool): Applique les augmentations
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations. Par défaut celles de la configuration.
        order (dict, optional): Ordre de traitement des granularités par branche

    Returns:
        Representation: Routeurs finaux
    """
    x = _check_input(x, config)
    if train_mode:
        augmenter = augmenter if augmenter is not None else AugmentationManager(config.augmentation)
        rng = rng if rng is not None else np.random.default_rng(config.augmentation.rng_seed)
    tokensets = build_all(x, config.spec, params, train_mode, rng, augmenter,
                          temporal=config.use_temporal, spatial=config.use_spatial)
    by_branch = {branch: [ts for ts in tokensets if ts.branch == branch] for branch in config.branches}
    order = order or {}
    for layer in range(config.layers):
        for branch in config.branches:
            by_branch[branch] = encoder_layer(by_branch[branch], params, layer, branch, config.heads,
                                              use_inter=config.use_inter, order=order.get(branch))
    routers = [ts.router for branch in config.branches for ts in by_branch[branch]]
    h = concat(routers, axis=1)
    return Representation(h)


def forward(x, config, params, train_mode=False, rng=None, augmenter=None, order=None):
    """
    Scores de classification.

    Args:
        x (ndarray): Segment [T, C] ou lot [B, T, C]
        config (ModelConfig): Configuration
        params (ParameterSet): Paramètres
        train_mode (bool): Applique les augmentations
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations
        order (dict, optional): Ordre de traitement des granularités par branche

    Returns:
        Tensor: Scores [B, K]
    """
    rep = encode(x, config, params, train_mode, rng, augmenter, order)
    B, rows, D = rep.h.shape
    if config.pooling == "flatten":
        features = reshape(rep.h, (B, rows * D))
    else:
        features = mean(rep.h, axis=1)
    w = params["classifier.w"]
    if features.shape[1] != w.shape[0]:
        raise ConfigError("classifieur incompatible", key="pooling", value=features.shape,
                          constraint=f"{w.shape[0]} entrées attendues")
    return add(matmul(features, w), params["classifier.b"])


def loss(logits, labels):
    """
    Entropie croisée −log softmax(logits)[label], moyennée sur le lot.

    Args:
        logits (Tensor): Scores [K] ou [B, K]
        labels (int | array_like): Classe(s)

    Returns:
        Tensor: Perte scalaire
    """
    if logits.ndim == 1:
        logits = reshape(logits, (1, logits.shape[0]))
    return cross_entropy(logits, np.atleast_1d(labels))


class ADformer:
    """
    Modèle prêt à l'emploi: configuration et paramètres, inférence par lots sans bande.
    """

    def __init__(self, config, params: Optional[ParameterSet] = None, seed=0):
        """
        Initialise le modèle.

        Args:
            config (ModelConfig): Configuration
            params (ParameterSet, optional): Paramètres existants
            seed (int): Graine d'initialisation si params est absent
        """
        self.config = config
        self.params = params if params is not None else init_parameters(config, seed)

    def forward(self, x, train_mode=False, rng=None, augmenter=None):
        return forward(x, self.config, self.params, train_mode, rng, augmenter)

    def predict_proba(self, X, batch_size=256):
        """
        Probabilités par classe, en mode évaluation (sans augmentation ni bande).

        Args:
            X (ndarray): Lot [B, T, C]
            batch_size (int): Taille des sous-lots

        Returns:
            ndarray: Probabilités [B, K]
        """
        X = _check_input(X, self.config)
        out = []
        with no_recording():
            for start in range(0, len(X), batch_size):
                out.append(softmax(self.forward(X[start:start + batch_size])).data)
        if not out:
            return np.zeros((0, self.config.classes), dtype=self.config.np_dtype)
        return np.concatenate(out)

    def predict(self, X, batch_size=256):
        return np.argmax(self.predict_proba(X, batch_size), axis=1)

    def census(self):
        return parameter_census(self.config)
