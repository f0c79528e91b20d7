#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration de l'affichage
----------------------------
Ce fichier contient les paramètres des graphiques des rapports (SVG).
"""

# Paramètres des figures
DPI = 100  # DPI des figures (dots per inch)
width, height = 800, 480  # Taille en pixels
figsize = (width / DPI, height / DPI)  # Taille de la figure en pouces pour matplotlib

PLOT_FORMAT = "svg"
# Sel fixe des identifiants SVG: mêmes octets pour un même rapport
SVG_HASHSALT = "adformer-lab"
BACKEND = "Agg"

# Couleurs des séries
BLUE = "#0078d7"
GREEN = "#00b400"
RED = "#c83232"
PURPLE = "#963296"
DARK_GRAY = "#646464"
SERIES_COLORS = {
    "sample_accuracy": BLUE,
    "sample_f1_macro": GREEN,
    "subject_accuracy": PURPLE,
    "subject_f1_macro": RED,
}

BAR_WIDTH = 0.2
ERROR_CAPSIZE = 3
FONT_SIZE = 10
