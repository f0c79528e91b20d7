#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration de l'entraînement
-------------------------------
Ce fichier contient les paramètres du protocole d'entraînement et d'évaluation:
optimiseur, calendrier du taux d'apprentissage, arrêt précoce, graines et partition.
"""

# Boucle d'entraînement
MAX_EPOCHS = 200
PATIENCE = 15
BATCH_SIZE = 512
DESK_BATCH_SIZE = 64

# AdamW
LR_MAX = 1e-4
LR_MIN = 0.0
WEIGHT_DECAY = 1e-2
BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8

# Écrêtage du gradient (norme L2 globale), désactivé par défaut
GRAD_CLIP = None

# Sélection du modèle
F1_AVERAGE = "macro"  # ou "weighted"

# Validation croisée Monte-Carlo
SEEDS = (41, 42, 43, 44, 45)
SPLIT_RATIO = (6, 2, 2)  # train / validation / test, par sujet

# Lot d'évaluation (inférence sans bande de calcul)
EVAL_BATCH_SIZE = 256

# Études
STUDY_LENGTHS = (128, 256, 512, 1024)
STUDY_OVERLAPS = (0.0, 0.2, 0.5, 0.8)
STUDIES = ("ablations", "lengths", "overlaps")
