#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Construction des objets d'une expérience
----------------------------------------
Ce module traduit une configuration d'expérience résolue en objets typés
(segmentation, augmentations, modèle, entraînement) et charge les données.
"""

import logging

from data.datasets import apply_task
from data.recordings import content_hash, manifest_hash, manifest_text, read_dataset
from data.synthetic import synth_generate
from functions.augmentation.augmentation_manager import AugmentationConfig
from functions.model.adformer import build_model_config as _model_config
from functions.preprocessing.segmentation import SegmentationPolicy
from functions.training.trainer import TrainConfig

logger = logging.getLogger(__name__)


def segmentation_policy(config, window_len=None, overlap_ratio=None):
    """
    Politique de segmentation, éventuellement avec T ou r remplacés (études).

    Args:
        config (ExperimentConfig): Configuration
        window_len (int, optional): Longueur T
        overlap_ratio (float, optional): Recouvrement r

    Returns:
        SegmentationPolicy: La politique
    """
    v = config.values
    return SegmentationPolicy(window_len=v["window_len"] if window_len is None else window_len,
                              overlap_ratio=v["overlap_ratio"] if overlap_ratio is None else overlap_ratio,
                              target_rate_hz=v["target_rate_hz"],
                              bandpass=v["bandpass"])


def augmentation_config(config, seed=0):
    v = config.values
    return AugmentationConfig(kinds=tuple(v["augmentations"]), prob=v["aug_prob"], ratio=v["aug_ratio"],
                              scale=v["aug_scale"], rng_seed=seed, shared_draw=v["shared_augmentation"])


def build_model_config(config, channels, window_len, classes, seed=0, ablation=None, single_granularity=False):
    """
    Configuration du modèle pour des données de C canaux.

    Args:
        config (ExperimentConfig): Configuration
        channels (int): Nombre de canaux C
        window_len (int): Longueur T
        classes (int): Nombre de classes K
        seed (int): Graine des augmentations
        ablation (str, optional): Variante (par défaut celle de la configuration)
        single_granularity (bool): Une seule granularité par branche (études de longueur et de recouvrement)

    Returns:
        ModelConfig: La configuration du modèle
    """
    v = config.values
    patch_lengths, factors = v["patch_len_list"], v["channel_factors"]
    if single_granularity:
        patch_lengths, factors = (v["study_patch_len"],), (v["study_channel_factor"],)
    return _model_config(channels, window_len, classes, profile=v["profile"], patch_lengths=patch_lengths,
                         channel_factors=factors, model_dim=v["model_dim"], layers=v["layers"],
                         heads=v["heads"], d_ff=v["d_ff"], ablation=ablation or v["ablation"],
                         pooling=v["pooling"], dtype=v["dtype"], augmentation=augmentation_config(config, seed))


def build_train_config(config, seed):
    v = config.values
    return TrainConfig(max_epochs=v["max_epochs"], patience=v["patience"], batch_size=v["batch_size"],
                       lr_max=v["lr_max"], lr_min=v["lr_min"], weight_decay=v["weight_decay"],
                       betas=tuple(v["betas"]), eps=v["adam_eps"], seed=seed, grad_clip=v["grad_clip"],
                       f1_average=v["f1_average"], eval_batch_size=v["eval_batch_size"],
                       progress=v["progress"])


def load_recordings(config):
    """
    Charge les enregistrements (synthétiques ou depuis le disque) et filtre la tâche.

    Args:
        config (ExperimentConfig): Configuration

    Returns:
        tuple: (liste de Recording, empreinte du manifeste, nombre de classes)
    """
    v = config.values
    if config.is_synthetic:
        recordings = synth_generate(v["synth_subjects"], v["synth_classes"], v["synth_channels"],
                                    v["synth_rate_hz"], v["synth_duration_s"], v["synth_seed"],
                                    v["synth_noise_std"])
        digest = content_hash(manifest_text(recordings))
    else:
        recordings = read_dataset(v["dataset"])
        digest = manifest_hash(v["dataset"])
    recordings = apply_task(recordings, v["task"], tuple(v["binary_classes"]))
    if v["task"] == "binary_ad_hc":
        classes = 2
    elif config.is_synthetic:
        classes = v["synth_classes"]
    else:
        classes = max(rec.label for rec in recordings) + 1
    logger.info("%d enregistrements, %d classes (tâche %s)", len(recordings), classes, v["task"])
    return recordings, digest, classes
