#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Programme principal du laboratoire ADformer
-------------------------------------------
Ce script expose les commandes du laboratoire:
- synth: génère un jeu de données synthétique sur disque
- train: exécute le protocole à plusieurs graines et écrit le rapport
- study: exécute une étude (ablations, longueurs, recouvrements)
- evaluate: réévalue le point de reprise d'une graine
- plot: trace les graphiques d'un rapport
- gradcheck: vérifie le gradient de bout en bout sur un modèle minuscule

Toute clé du fichier de configuration peut être surchargée par `--clé valeur`.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from config.experiment_config import parse_config
from config.logging_config import DEFAULT_LEVEL, setup_logging
from config.training_config import STUDIES
from data.recordings import write_dataset
from data.synthetic import synth_generate
from functions.display.plots import emit_plots
from functions.errors import ConfigError, LabError
from functions.experiments.oracles import tiny_model_gradcheck
from functions.experiments.runner import evaluate_checkpoint, read_report, run_experiment

logger = logging.getLogger("adformer_lab")

GRADCHECK_TOLERANCE = 1e-4


def build_parser():
    parser = argparse.ArgumentParser(prog="adformer-lab", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--log-level", default=DEFAULT_LEVEL, help="niveau de journalisation")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("--config", type=Path, help="fichier de configuration INI")
        return p

    synth = with_config(sub.add_parser("synth", help="génère un jeu de données synthétique"))
    synth.add_argument("--out", type=Path, required=True, help="répertoire du jeu de données")

    with_config(sub.add_parser("train", help="protocole à plusieurs graines"))

    study = with_config(sub.add_parser("study", help="étude d'ablation, de longueur ou de recouvrement"))
    study.add_argument("name", choices=STUDIES)

    evaluate = with_config(sub.add_parser("evaluate", help="réévalue le point de reprise d'une graine"))
    evaluate.add_argument("seed_dir", type=Path, help="répertoire de la graine (model.bin, split.json)")

    plot = sub.add_parser("plot", help="graphiques SVG d'un rapport")
    plot.add_argument("report", type=Path)
    plot.add_argument("--out", type=Path, help="répertoire des graphiques (par défaut celui du rapport)")

    gradcheck = sub.add_parser("gradcheck", help="vérification du gradient de bout en bout")
    gradcheck.add_argument("--seed", type=int, default=0)
    gradcheck.add_argument("--coords", type=int, default=200)
    return parser


def parse_overrides(extra):
    """
    Lit les surcharges `--clé valeur` restantes.

    Args:
        extra (list): Arguments non reconnus par argparse

    Returns:
        dict: Clé -> valeur texte
    """
    overrides = {}
    it = iter(extra)
    for token in it:
        if not token.startswith("--"):
            raise ConfigError(f"argument inattendu: {token}")
        key = token[2:].replace("-", "_")
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            value = next(it, None)
            if value is None:
                raise ConfigError("valeur manquante", key=key, value=None, constraint="--clé valeur")
        overrides[key] = value
    return overrides


def run(args, extra):
    """Exécute une commande et retourne le code de sortie."""
    if args.command == "plot":
        if extra:
            raise ConfigError(f"arguments inattendus: {' '.join(extra)}")
        paths = emit_plots(read_report(args.report), args.out or args.report.parent)
        for path in paths:
            print(path)
        return 0
    if args.command == "gradcheck":
        error, elapsed = tiny_model_gradcheck(seed=args.seed, n_coords=args.coords)
        print(json.dumps({"max_relative_error": error, "coords": args.coords, "seconds": elapsed}))
        return 0 if error < GRADCHECK_TOLERANCE else 1

    overrides = parse_overrides(extra)
    if args.command == "study":
        overrides["study"] = args.name
    config = parse_config(args.config, overrides)

    if args.command == "synth":
        v = config.values
        recordings = synth_generate(v["synth_subjects"], v["synth_classes"], v["synth_channels"],
                                    v["synth_rate_hz"], v["synth_duration_s"], v["synth_seed"],
                                    v["synth_noise_std"])
        print(write_dataset(args.out, recordings))
        return 0
    if args.command == "evaluate":
        report = evaluate_checkpoint(config, args.seed_dir)
        print(json.dumps(report.to_dict(), indent=2))
        return 0

    report, path = run_experiment(config)
    print(path)
    if not report["complete"]:
        logger.error("%d graine(s) en échec, rapport partiel: %s", len(report["failures"]), path)
        return 1
    return 0


def main(argv=None):
    """
    Fonction principale.

    Args:
        argv (list, optional): Arguments (par défaut sys.argv[1:])

    Returns:
        int: Code de sortie
    """
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    setup_logging(args.log_level)
    try:
        return run(args, extra)
    except LabError as exc:
        logger.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
