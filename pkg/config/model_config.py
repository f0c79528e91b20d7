#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration du modèle
-----------------------
Ce fichier contient les hyperparamètres du transformeur multi-granularité:
granularités des deux branches, dimensions, profils prédéfinis et augmentations.
"""

# Granularités de la branche temporelle (longueurs de patch L_i)
PATCH_LEN_LIST = (2, 4, 8)

# Granularités de la branche spatiale: multiples du nombre de canaux C
SCALED_CHANNEL_FACTORS = (1, 2, 4)

# Profil "desk": exécutable en quelques minutes sur un portable
DESK_PROFILE = {"model_dim": 64, "layers": 4, "heads": 8, "d_ff": 128}

# Profil "paper": réglages de la taille des expériences publiées
PAPER_PROFILE = {"model_dim": 128, "layers": 12, "heads": 8, "d_ff": 256}

PROFILES = {"desk": DESK_PROFILE, "paper": PAPER_PROFILE}
DEFAULT_PROFILE = "desk"

# Variantes d'ablation
ABLATIONS = ("full", "no_inter", "no_temporal", "no_spatial")

# Tête de classification
POOLINGS = ("flatten", "mean")

# Initialisation
GRANULARITY_INIT_STD = 0.02  # W_gr ~ N(0, 0.02²)
LAYER_NORM_EPS = 1e-5
POS_BASE = 10000.0  # Base des fréquences des tables sinusoïdales

# Études de longueur/recouvrement: une seule granularité
STUDY_PATCH_LEN = 4
STUDY_CHANNEL_FACTOR = 4  # 76 canaux pour 19 électrodes

# Augmentations (valeurs par défaut de la banque d'augmentations)
AUGMENTATION_KINDS = ("flip", "mask_time", "mask_freq", "mask_channel", "jitter", "dropout")
DEFAULT_AUGMENTATIONS = ("flip", "jitter")
AUG_PROB = 0.5  # flip
AUG_RATIO = 0.1  # masques, dropout
AUG_SCALE = 0.1  # jitter
