#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Configuration des expériences
-----------------------------
Ce fichier décrit le fichier de configuration texte des expériences (format INI,
`clé = valeur` sous des en-têtes de section) et le transforme en objets typés:
politique de segmentation, configuration du modèle, protocole d'entraînement.

Les clés sont uniques sur l'ensemble des sections, ce qui permet de surcharger
n'importe laquelle en ligne de commande par `--clé valeur`.
"""

import configparser
import difflib
from collections import OrderedDict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from config import data_config as dc
from config import model_config as mc
from config import training_config as tc
from functions.errors import ConfigError
from functions.experiments.builders import augmentation_config, build_train_config, segmentation_policy


def _int(text):
    return int(text)


def _float(text):
    return float(text)


def _bool(text):
    lowered = str(text).strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(text)


def _optional_float(text):
    return None if str(text).strip().lower() in ("", "none") else float(text)


def _optional_int(text):
    return None if str(text).strip().lower() in ("", "none") else int(text)


def _ints(text):
    return tuple(int(part) for part in str(text).split(",") if part.strip())


def _floats(text):
    return tuple(float(part) for part in str(text).split(",") if part.strip())


def _names(text):
    text = str(text).strip()
    if text.lower() in ("", "none"):
        return ()
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _band(text):
    if str(text).strip().lower() in ("", "none"):
        return None
    values = _floats(text)
    if len(values) != 2:
        raise ValueError(text)
    return values


def _str(text):
    return str(text).strip()


def _choice(*options):
    def parse(text):
        text = str(text).strip()
        if text not in options:
            raise ValueError(text)
        return text
    parse.constraint = f"parmi {', '.join(options)}"
    return parse


def _render(value):
    if isinstance(value, (tuple, list)):
        return ",".join(str(v) for v in value) if value else "none"
    return "none" if value is None else str(value)


# clé -> (section, analyseur, valeur par défaut, contrainte affichée)
SCHEMA = OrderedDict([
    ("dataset", ("data", _str, dc.DEFAULT_DATASET, "chemin d'un jeu de données ou 'synthetic'")),
    ("task", ("data", _choice("multiclass", "binary_ad_hc"), "multiclass", None)),
    ("binary_classes", ("data", _ints, dc.BINARY_CLASSES, "deux indices de classe")),
    ("synth_subjects", ("data", _int, dc.SYNTH_SUBJECTS, "entier >= 3")),
    ("synth_classes", ("data", _int, dc.SYNTH_CLASSES, "entier >= 2")),
    ("synth_channels", ("data", _int, dc.SYNTH_CHANNELS, "entier >= 1")),
    ("synth_rate_hz", ("data", _float, dc.SYNTH_RATE_HZ, "réel > 0")),
    ("synth_duration_s", ("data", _float, dc.SYNTH_DURATION_S, "réel > 0")),
    ("synth_seed", ("data", _int, dc.SYNTH_SEED, "entier")),
    ("synth_noise_std", ("data", _float, dc.SYNTH_NOISE_STD, "réel >= 0")),

    ("window_len", ("segmentation", _int, dc.WINDOW_LEN, "entier >= 1")),
    ("overlap_ratio", ("segmentation", _float, dc.OVERLAP_RATIO, "réel dans [0, 1)")),
    ("target_rate_hz", ("segmentation", _float, dc.TARGET_RATE_HZ, "réel > 0")),
    ("bandpass", ("segmentation", _band, dc.BANDPASS, "'bas,haut' en Hz ou 'none'")),
    ("zscore_per_channel", ("segmentation", _bool, dc.ZSCORE_PER_CHANNEL, "booléen")),

    ("profile", ("model", _choice(*mc.PROFILES), mc.DEFAULT_PROFILE, None)),
    ("model_dim", ("model", _optional_int, None, "entier >= 1 ou 'none' (profil)")),
    ("layers", ("model", _optional_int, None, "entier >= 1 ou 'none' (profil)")),
    ("heads", ("model", _optional_int, None, "entier >= 1 ou 'none' (profil)")),
    ("d_ff", ("model", _optional_int, None, "entier >= 1 ou 'none' (profil)")),
    ("patch_len_list", ("model", _ints, mc.PATCH_LEN_LIST, "entiers >= 1 séparés par des virgules")),
    ("channel_factors", ("model", _floats, mc.SCALED_CHANNEL_FACTORS, "multiples de C séparés par des virgules")),
    ("ablation", ("model", _choice(*mc.ABLATIONS), "full", None)),
    ("pooling", ("model", _choice(*mc.POOLINGS), "flatten", None)),
    ("dtype", ("model", _choice("float64", "float32"), "float64", None)),

    ("augmentations", ("augmentation", _names, mc.DEFAULT_AUGMENTATIONS,
                       f"noms parmi {','.join(mc.AUGMENTATION_KINDS)}")),
    ("aug_prob", ("augmentation", _float, mc.AUG_PROB, "réel dans [0, 1]")),
    ("aug_ratio", ("augmentation", _float, mc.AUG_RATIO, "réel dans [0, 1)")),
    ("aug_scale", ("augmentation", _float, mc.AUG_SCALE, "réel > 0")),
    ("shared_augmentation", ("augmentation", _bool, False, "booléen")),

    ("max_epochs", ("training", _int, tc.MAX_EPOCHS, "entier >= 1")),
    ("patience", ("training", _int, tc.PATIENCE, "entier dans [1, max_epochs)")),
    ("batch_size", ("training", _int, tc.DESK_BATCH_SIZE, "entier >= 1")),
    ("lr_max", ("training", _float, tc.LR_MAX, "réel > 0")),
    ("lr_min", ("training", _float, tc.LR_MIN, "réel dans [0, lr_max]")),
    ("weight_decay", ("training", _float, tc.WEIGHT_DECAY, "réel >= 0")),
    ("betas", ("training", _floats, tc.BETAS, "deux réels dans [0, 1)")),
    ("adam_eps", ("training", _float, tc.ADAM_EPS, "réel > 0")),
    ("grad_clip", ("training", _optional_float, tc.GRAD_CLIP, "réel > 0 ou 'none'")),
    ("f1_average", ("training", _choice("macro", "weighted"), tc.F1_AVERAGE, None)),
    ("eval_batch_size", ("training", _int, tc.EVAL_BATCH_SIZE, "entier >= 1")),

    ("seeds", ("experiment", _ints, tc.SEEDS, "entiers séparés par des virgules")),
    ("split_ratio", ("experiment", _ints, tc.SPLIT_RATIO, "trois poids train,val,test")),
    ("stratify", ("experiment", _bool, True, "booléen")),
    ("study", ("experiment", _choice("none", *tc.STUDIES), "none", None)),
    ("study_lengths", ("experiment", _ints, tc.STUDY_LENGTHS, "entiers >= 1")),
    ("study_overlaps", ("experiment", _floats, tc.STUDY_OVERLAPS, "réels dans [0, 1)")),
    ("study_patch_len", ("experiment", _int, mc.STUDY_PATCH_LEN, "entier >= 1")),
    ("study_channel_factor", ("experiment", _float, mc.STUDY_CHANNEL_FACTOR, "réel > 0")),
    ("output_dir", ("experiment", _str, "runs", "répertoire")),
    ("jobs", ("experiment", _int, 1, "entier >= 1")),
    ("progress", ("experiment", _bool, True, "booléen")),
])

SECTIONS = ("data", "segmentation", "model", "augmentation", "training", "experiment")


@dataclass
class ExperimentConfig:
    """Valeurs résolues (défauts, fichier, surcharges) de toutes les clés."""

    values: OrderedDict = field(default_factory=OrderedDict)
    source: Optional[str] = None

    def __getitem__(self, key):
        return self.values[key]

    def replace(self, **changes):
        """Copie avec des valeurs remplacées (déjà typées), revalidée."""
        values = OrderedDict(self.values)
        for key, value in changes.items():
            _known(key)
            values[key] = value
        config = ExperimentConfig(values, self.source)
        validate(config)
        return config

    def to_dict(self):
        """Écho complet par section, pour la provenance des rapports."""
        out = OrderedDict((section, OrderedDict()) for section in SECTIONS)
        for key, (section, _, _, _) in SCHEMA.items():
            value = self.values[key]
            out[section][key] = list(value) if isinstance(value, tuple) else value
        return out

    def to_text(self):
        """Fichier INI équivalent."""
        lines = []
        for section, entries in self.to_dict().items():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {_render(value)}" for key, value in entries.items())
            lines.append("")
        return "\n".join(lines)

    @property
    def is_synthetic(self):
        return self.values["dataset"] == "synthetic"


def _known(key):
    if key not in SCHEMA:
        suggestion = difflib.get_close_matches(key, SCHEMA.keys(), n=1)
        hint = f"vouliez-vous dire '{suggestion[0]}' ?" if suggestion else "voir --help"
        raise ConfigError(f"clé inconnue ({hint})", key=key, value=None, constraint="clé du schéma")


def _parse_value(key, raw):
    section, parser, _, constraint = SCHEMA[key]
    try:
        return parser(raw)
    except (TypeError, ValueError):
        raise ConfigError("valeur invalide", key=key, value=raw,
                          constraint=constraint or getattr(parser, "constraint", "voir la documentation"))


def validate(config):
    """
    Vérifie les contraintes en construisant les objets typés.

    Args:
        config (ExperimentConfig): Configuration à vérifier
    """
    v = config.values
    segmentation_policy(config)
    augmentation_config(config)
    build_train_config(config, seed=v["seeds"][0] if v["seeds"] else 0)
    checks = [
        ("seeds", len(v["seeds"]) >= 1),
        ("split_ratio", len(v["split_ratio"]) == 3 and all(w >= 0 for w in v["split_ratio"])
         and sum(v["split_ratio"]) > 0),
        ("binary_classes", len(v["binary_classes"]) == 2 and len(set(v["binary_classes"])) == 2),
        ("synth_subjects", v["synth_subjects"] >= 3),
        ("synth_classes", v["synth_classes"] >= 2),
        ("synth_channels", v["synth_channels"] >= 1),
        ("synth_rate_hz", v["synth_rate_hz"] > 0),
        ("synth_duration_s", v["synth_duration_s"] > 0),
        ("synth_noise_std", v["synth_noise_std"] >= 0),
        ("patch_len_list", all(L >= 1 for L in v["patch_len_list"])),
        ("channel_factors", all(f > 0 for f in v["channel_factors"])),
        ("study_lengths", all(T >= 1 for T in v["study_lengths"])),
        ("study_overlaps", all(0 <= r < 1 for r in v["study_overlaps"])),
        ("study_patch_len", v["study_patch_len"] >= 1),
        ("study_channel_factor", v["study_channel_factor"] > 0),
        ("jobs", v["jobs"] >= 1),
        ("eval_batch_size", v["eval_batch_size"] >= 1),
        ("adam_eps", v["adam_eps"] > 0),
    ] + [(key, v[key] is None or v[key] >= 1) for key in ("model_dim", "layers", "heads", "d_ff")]
    for key, ok in checks:
        if not ok:
            raise ConfigError("valeur invalide", key=key, value=v[key], constraint=SCHEMA[key][3])


def parse_config(path=None, overrides=None, text=None):
    """
    Lit un fichier de configuration et applique les surcharges.

    Args:
        path (str | Path, optional): Fichier INI
        overrides (dict, optional): Clé -> valeur texte (ligne de commande)
        text (str, optional): Contenu INI (à la place d'un fichier)

    Returns:
        ExperimentConfig: Configuration validée, défauts remplis
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"fichier de configuration introuvable: {path}")
        text = path.read_text(encoding="utf-8")
    if text:
        try:
            parser.read_string(text, source=str(path or "<texte>"))
        except configparser.Error as exc:
            raise ConfigError(f"fichier de configuration illisible: {exc}")

    values = OrderedDict((key, default) for key, (_, _, default, _) in SCHEMA.items())
    for section in parser.sections():
        if section not in SECTIONS:
            suggestion = difflib.get_close_matches(section, SECTIONS, n=1)
            raise ConfigError("section inconnue", key=f"[{section}]", value=None,
                              constraint=f"parmi {', '.join(SECTIONS)}"
                              + (f" (vouliez-vous dire [{suggestion[0]}] ?)" if suggestion else ""))
        for key, raw in parser.items(section):
            _known(key)
            if SCHEMA[key][0] != section:
                raise ConfigError("clé dans la mauvaise section", key=key, value=section,
                                  constraint=f"section [{SCHEMA[key][0]}]")
            values[key] = _parse_value(key, raw)
    for key, raw in (overrides or {}).items():
        _known(key)
        values[key] = _parse_value(key, raw)

    config = ExperimentConfig(values, str(path) if path is not None else None)
    validate(config)
    return config
