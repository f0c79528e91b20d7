#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exceptions du laboratoire
-------------------------
Ce module regroupe les exceptions levées par les différents modules.
Chaque exception dérive aussi de l'exception native la plus proche, pour que
les appelants puissent les intercepter sans connaître la hiérarchie.
"""


class LabError(Exception):
    """Classe de base de toutes les erreurs du laboratoire."""


class DimensionError(LabError, ValueError):
    """Dimensions incompatibles entre deux tenseurs ou avec une configuration."""


class NumericError(LabError, ArithmeticError):
    """Valeur non finie (NaN, infini) rencontrée dans un calcul."""


class ParameterError(LabError, ValueError):
    """Paramètre d'opération hors de son domaine de validité."""


class UnsupportedError(LabError, NotImplementedError):
    """Opération demandée mais non prise en charge (par ex. sur-échantillonnage)."""


class ConfigError(LabError, ValueError):
    """Configuration invalide: clé inconnue, valeur hors contrainte, partition vide."""

    def __init__(self, message, key=None, value=None, constraint=None):
        if key is not None:
            message = f"{message} [clé={key!r}, valeur={value!r}, contrainte: {constraint}]"
        super().__init__(message)
        self.key = key
        self.value = value
        self.constraint = constraint


class UsageError(LabError, ValueError):
    """Appel incohérent d'une opération (par ex. branches mélangées)."""


class LeakageError(LabError, RuntimeError):
    """Un sujet apparaît dans plusieurs partitions train/validation/test."""


class TrainingError(LabError, RuntimeError):
    """Échec de l'optimisation (gradient non fini, etc.)."""

    def __init__(self, message, parameters=()):
        if parameters:
            message = f"{message}: {', '.join(parameters)}"
        super().__init__(message)
        self.parameters = tuple(parameters)
