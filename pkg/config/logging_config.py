#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration de la journalisation
----------------------------------
Ce fichier contient les paramètres de journalisation partagés par tous les modules.
Chaque module obtient son logger avec logging.getLogger(__name__).
"""

import logging

# Paramètres de journalisation
LOG_FORMAT = "%(asctime)s %(levelname)-7s %(name)s: %(message)s"
DATE_FORMAT = "%H:%M:%S"
DEFAULT_LEVEL = "INFO"


def setup_logging(level=DEFAULT_LEVEL):
    """
    Configure la journalisation de l'application.

    Args:
        level (str | int): Niveau de journalisation (nom ou valeur numérique)
    """
    if isinstance(level, str):
        level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=DATE_FORMAT, force=True)
