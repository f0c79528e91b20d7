#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration des données
-------------------------
Ce fichier contient les paramètres de prétraitement des enregistrements EEG et
du générateur de données synthétiques.
"""

import os

# Prétraitement
BANDPASS = (0.5, 45.0)  # Bande passante du filtre FIR (Hz)
TARGET_RATE_HZ = 128.0  # Fréquence après ré-échantillonnage
WINDOW_LEN = 128  # Longueur T d'un échantillon (1 s à 128 Hz)
OVERLAP_RATIO = 0.5  # Recouvrement entre fenêtres successives
ZSCORE_EPS = 1e-8  # Plancher de l'écart-type
ZSCORE_PER_CHANNEL = False  # Normalisation conjointe sur tout le segment T×C

# Nombre de coefficients du filtre: FIR_TAPS_PER_CYCLE périodes de la coupure basse
FIR_TAPS_PER_CYCLE = 4

# Données synthétiques
SYNTH_SUBJECTS = 20
SYNTH_CLASSES = 2
SYNTH_CHANNELS = 8
SYNTH_RATE_HZ = 128.0
SYNTH_DURATION_S = 20.0
SYNTH_SEED = 41
SYNTH_BASE_FREQ_HZ = 5.0  # Classe k -> (k+1) * 5 Hz
SYNTH_NOISE_STD = 0.5

# Format disque
MANIFEST_NAME = "manifest.tsv"
RECORDING_SUFFIX = ".rec"

# Tâche binaire AD vs HC: indices des deux classes retenues
BINARY_CLASSES = (0, 1)

# Racine par défaut des jeux de données
DATA_ROOT_ENV = "ADFORMER_LAB_DATA"
DEFAULT_DATASET = os.environ.get(DATA_ROOT_ENV, "synthetic")
