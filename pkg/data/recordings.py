#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Enregistrements et format disque
--------------------------------
Ce module définit les enregistrements (Recording) et les échantillons fenêtrés
(Segment), ainsi que la lecture et l'écriture du format de jeu de données:

- un fichier par enregistrement: une ligne d'en-tête UTF-8
  `subject_id,label,channels,rate_hz,samples`, puis les valeurs en flottants
  32 bits petit-boutistes, canal par canal;
- un fichier `manifest.tsv` listant les fichiers et leurs étiquettes.
"""

import hashlib
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from config.data_config import MANIFEST_NAME, RECORDING_SUFFIX
from functions.errors import ConfigError, DimensionError, ParameterError

logger = logging.getLogger(__name__)


@dataclass
class Recording:
    """Série multicanal continue d'un sujet, avec son identité et son diagnostic."""

    subject_id: str
    label: int
    sampling_rate_hz: float
    series: np.ndarray  # C × S

    def __post_init__(self):
        self.series = np.asarray(self.series, dtype=np.float64)
        if self.series.ndim != 2:
            raise DimensionError(f"Recording: série de forme {self.series.shape}, attendu C×S")
        if self.sampling_rate_hz <= 0:
            raise ParameterError(f"Recording: fréquence {self.sampling_rate_hz} non positive")
        if "," in self.subject_id or "\n" in self.subject_id:
            raise ParameterError(f"Recording: identifiant de sujet invalide {self.subject_id!r}")

    @property
    def channels(self):
        return self.series.shape[0]

    @property
    def samples(self):
        return self.series.shape[1]

    def replace_series(self, series, sampling_rate_hz=None):
        """
        Retourne une copie avec une nouvelle série (et éventuellement une nouvelle fréquence).

        Args:
            series (ndarray): Nouvelle série C×S'
            sampling_rate_hz (float, optional): Nouvelle fréquence

        Returns:
            Recording: Nouvel enregistrement
        """
        rate = self.sampling_rate_hz if sampling_rate_hz is None else sampling_rate_hz
        return Recording(self.subject_id, self.label, rate, series)


@dataclass
class Segment:
    """Échantillon fenêtré T×C (temps en premier) et sa provenance."""

    subject_id: str
    label: int
    data: np.ndarray  # T × C
    window_index: int = 0
    meta: dict = field(default_factory=dict)


def write_recording(path, recording):
    """
    Écrit un enregistrement au format disque.

    Args:
        path (str | Path): Fichier de destination
        recording (Recording): Enregistrement à écrire
    """
    header = (f"{recording.subject_id},{recording.label},{recording.channels},"
              f"{recording.sampling_rate_hz!r},{recording.samples}\n")
    with open(path, "wb") as handle:
        handle.write(header.encode("utf-8"))
        handle.write(np.ascontiguousarray(recording.series, dtype="<f4").tobytes())


def read_recording(path):
    """
    Lit un enregistrement du format disque.

    Args:
        path (str | Path): Fichier à lire

    Returns:
        Recording: L'enregistrement (valeurs converties en 64 bits)
    """
    raw = Path(path).read_bytes()
    end = raw.index(b"\n")
    fields = raw[:end].decode("utf-8").split(",")
    if len(fields) != 5:
        raise ConfigError(f"{path}: en-tête invalide {raw[:end]!r}")
    subject_id, label, channels, rate_hz, samples = fields
    channels, samples = int(channels), int(samples)
    values = np.frombuffer(raw[end + 1:], dtype="<f4")
    if values.size != channels * samples:
        raise DimensionError(f"{path}: {values.size} valeurs pour {channels}×{samples}")
    return Recording(subject_id, int(label), float(rate_hz), values.reshape(channels, samples))


def manifest_text(recordings):
    """Contenu du manifeste (nom de fichier, étiquette) pour une liste d'enregistrements."""
    lines = ["filename\tlabel"]
    for rec in recordings:
        lines.append(f"{rec.subject_id}{RECORDING_SUFFIX}\t{rec.label}")
    return "\n".join(lines) + "\n"


def write_dataset(directory, recordings):
    """
    Écrit un jeu de données complet (fichiers + manifeste).

    Args:
        directory (str | Path): Répertoire de destination
        recordings (list): Liste de Recording

    Returns:
        Path: Chemin du manifeste
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for rec in recordings:
        write_recording(directory / f"{rec.subject_id}{RECORDING_SUFFIX}", rec)
    manifest = directory / MANIFEST_NAME
    manifest.write_text(manifest_text(recordings), encoding="utf-8")
    logger.info("Jeu de données écrit: %d enregistrements dans %s", len(recordings), directory)
    return manifest


def read_dataset(directory):
    """
    Lit un jeu de données à partir de son manifeste.

    Args:
        directory (str | Path): Répertoire du jeu de données

    Returns:
        list: Liste de Recording, dans l'ordre du manifeste
    """
    directory = Path(directory)
    manifest = directory / MANIFEST_NAME
    if not manifest.exists():
        raise ConfigError(f"manifeste introuvable: {manifest}")
    recordings = []
    for line in manifest.read_text(encoding="utf-8").splitlines()[1:]:
        if not line.strip():
            continue
        filename, label = line.split("\t")
        rec = read_recording(directory / filename)
        if rec.label != int(label):
            raise ConfigError(f"{filename}: étiquette {rec.label} différente du manifeste ({label})")
        recordings.append(rec)
    logger.info("Jeu de données lu: %d enregistrements depuis %s", len(recordings), directory)
    return recordings


def content_hash(text):
    """Empreinte SHA-256 d'un contenu texte ou binaire."""
    if isinstance(text, str):
        text = text.encode("utf-8")
    return hashlib.sha256(text).hexdigest()


def manifest_hash(directory):
    """Empreinte du manifeste d'un jeu de données sur disque."""
    return content_hash((Path(directory) / MANIFEST_NAME).read_bytes())
