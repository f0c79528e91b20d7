#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Graphiques des rapports
-----------------------
Ce module trace les métriques d'un rapport d'expérience en SVG:

- étude d'ablation: barres groupées par variante (quatre métriques);
- études de longueur et de recouvrement: courbes du F1 échantillon et du F1 sujet
  en fonction de la variable étudiée;
- exécution simple: barres des quatre métriques.

Les octets produits ne dépendent que du rapport (sel SVG fixe, pas de date).
"""

import logging
from pathlib import Path

import matplotlib

from config.display_config import (
    BACKEND, BAR_WIDTH, DARK_GRAY, DPI, ERROR_CAPSIZE, FONT_SIZE, PLOT_FORMAT, SERIES_COLORS, SVG_HASHSALT, figsize,
)
from functions.errors import ParameterError

matplotlib.use(BACKEND)
import matplotlib.pyplot as plt  # noqa: E402

logger = logging.getLogger(__name__)

LINE_METRICS = ("sample_f1_macro", "subject_f1_macro")
BAR_METRICS = ("sample_accuracy", "sample_f1_macro", "subject_accuracy", "subject_f1_macro")
LABELS = {
    "sample_accuracy": "exactitude (échantillon)",
    "sample_f1_macro": "F1 (échantillon)",
    "subject_accuracy": "exactitude (sujet)",
    "subject_f1_macro": "F1 (sujet)",
}


def _blocks(report):
    blocks = [b for b in report.get("blocks", []) if b.get("aggregate")]
    if not blocks:
        raise ParameterError("rapport vide: aucun bloc avec des métriques agrégées")
    return blocks


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with plt.rc_context({"svg.hashsalt": SVG_HASHSALT, "svg.fonttype": "none"}):
        fig.savefig(path, format=PLOT_FORMAT, dpi=DPI, metadata={"Date": None})
    plt.close(fig)
    logger.info("graphique écrit: %s", path)
    return path


def plot_lines(blocks, variable, path):
    """
    Courbes du F1 échantillon et sujet (moyenne ± écart-type) selon la variable étudiée.

    Args:
        blocks (list): Blocs du rapport
        variable (str): Nom de la variable (window_len, overlap_ratio)
        path (str | Path): Fichier SVG

    Returns:
        Path: Le fichier écrit
    """
    x = [b["value"] for b in blocks]
    fig, ax = plt.subplots(figsize=figsize, dpi=DPI)
    for metric in LINE_METRICS:
        means = [b["aggregate"][metric]["mean"] for b in blocks]
        stds = [b["aggregate"][metric]["std"] for b in blocks]
        ax.errorbar(x, means, yerr=stds, marker="o", capsize=ERROR_CAPSIZE,
                    color=SERIES_COLORS[metric], label=LABELS[metric])
    ax.set_xticks(x)
    ax.set_xlabel(variable, fontsize=FONT_SIZE)
    ax.set_ylabel("F1", fontsize=FONT_SIZE)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, color=DARK_GRAY, alpha=0.2)
    ax.legend(fontsize=FONT_SIZE)
    return _save(fig, path)


def plot_bars(blocks, path):
    """
    Barres groupées des quatre métriques par bloc (variante d'ablation ou exécution simple).

    Args:
        blocks (list): Blocs du rapport
        path (str | Path): Fichier SVG

    Returns:
        Path: Le fichier écrit
    """
    names = [b["name"] for b in blocks]
    fig, ax = plt.subplots(figsize=figsize, dpi=DPI)
    offset = -(len(BAR_METRICS) - 1) / 2
    for k, metric in enumerate(BAR_METRICS):
        means = [b["aggregate"][metric]["mean"] for b in blocks]
        stds = [b["aggregate"][metric]["std"] for b in blocks]
        positions = [i + (offset + k) * BAR_WIDTH for i in range(len(blocks))]
        ax.bar(positions, means, BAR_WIDTH, yerr=stds, capsize=ERROR_CAPSIZE,
               color=SERIES_COLORS[metric], label=LABELS[metric])
    ax.set_xticks(range(len(blocks)))
    ax.set_xticklabels(names, fontsize=FONT_SIZE)
    ax.set_ylim(0.0, 1.05)
    ax.grid(True, axis="y", color=DARK_GRAY, alpha=0.2)
    ax.legend(fontsize=FONT_SIZE, loc="lower right")
    return _save(fig, path)


def emit_plots(report, out_dir):
    """
    Trace les graphiques d'un rapport.

    Args:
        report (dict): Rapport d'expérience (JSON relu)
        out_dir (str | Path): Répertoire de sortie

    Returns:
        list: Fichiers écrits
    """
    blocks = _blocks(report)
    out_dir = Path(out_dir)
    study = report.get("study")
    if study in ("lengths", "overlaps"):
        return [plot_lines(blocks, blocks[0]["variable"], out_dir / f"{study}.{PLOT_FORMAT}")]
    name = study or "metrics"
    return [plot_bars(blocks, out_dir / f"{name}.{PLOT_FORMAT}")]
