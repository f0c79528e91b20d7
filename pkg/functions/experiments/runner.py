#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Exécution des expériences
-------------------------
Ce module exécute le protocole complet pour chaque graine:
partition par sujet -> entraînement -> évaluation, puis agrège moyenne ± écart-type.

Une expérience se compose de blocs: un seul bloc pour une exécution simple, un bloc
par variante pour les ablations, un bloc par valeur de T ou de r pour les études de
longueur et de recouvrement (la segmentation est refaite pour chaque valeur).
Chaque graine est isolée (générateurs et répertoire propres) et peut s'exécuter
dans un processus séparé.
"""

import json
import logging
from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from config.logging_config import setup_logging
from config.model_config import ABLATIONS
from functions.evaluation.metrics import aggregate_reports, evaluate
from functions.evaluation.splits import SplitPlan, split_data, split_subjects
from functions.experiments.builders import (
    build_model_config, build_train_config, load_recordings, segmentation_policy,
)
from functions.model.adformer import ADformer
from functions.model.checkpoint import load_checkpoint, save_checkpoint
from functions.preprocessing.pipeline import prepare
from functions.training.trainer import train

logger = logging.getLogger(__name__)

REPORT_NAME = "report.json"


def _block_plan(config):
    """Liste des blocs (nom, variable, valeur, ablation, T, r, granularité unique)."""
    v = config.values
    study = v["study"]
    if study == "ablations":
        return [(name, "ablation", name, name, None, None, False) for name in ABLATIONS]
    if study == "lengths":
        return [(f"T={T}", "window_len", T, None, T, None, True) for T in v["study_lengths"]]
    if study == "overlaps":
        return [(f"r={r:g}", "overlap_ratio", r, None, None, r, True) for r in v["study_overlaps"]]
    return [(v["ablation"], "ablation", v["ablation"], None, None, None, False)]


def run_seed(config, seed, prepared, classes, ablation=None, single_granularity=False, out_dir=None):
    """
    Exécute une graine: partition, entraînement, évaluation sur le test.

    Args:
        config (ExperimentConfig): Configuration
        seed (int): Graine (partition, initialisation, mélange, augmentations)
        prepared (PreparedData): Segments prétraités
        classes (int): Nombre de classes K
        ablation (str, optional): Variante du modèle
        single_granularity (bool): Une granularité par branche
        out_dir (Path, optional): Répertoire de la graine (historique, point de reprise, partition)

    Returns:
        dict: Résultats sérialisables de la graine
    """
    samples = prepared.samples
    plan = split_subjects(samples.subject_labels(), config["split_ratio"], seed, config["stratify"])
    logger.info("graine %d: %d/%d/%d sujets", seed, *plan.sizes())
    train_data, val_data, test_data = split_data(samples, plan)
    model_config = build_model_config(config, samples.X.shape[2], samples.X.shape[1], classes,
                                      seed=seed, ablation=ablation, single_granularity=single_granularity)
    train_config = build_train_config(config, seed)

    history_path = checkpoint_path = None
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        history_path = out_dir / "history.tsv"
        checkpoint_path = out_dir / "model.bin"
        (out_dir / "split.json").write_text(json.dumps(plan.to_dict(), indent=2) + "\n", encoding="utf-8")

    result = train(model_config, train_config, train_data, val_data, history_path=history_path)
    model = ADformer(model_config, result.params)
    report = evaluate(model, plan, test_data, batch_size=train_config.eval_batch_size)
    if checkpoint_path is not None:
        save_checkpoint(checkpoint_path, result.params, model_config)

    return OrderedDict([
        ("seed", seed),
        ("split", plan.to_dict()),
        ("best_epoch", result.best_epoch),
        ("best_val_f1", result.best_val_f1),
        ("epochs", len(result.history)),
        ("stopped_early", result.stopped_early),
        ("final_train_loss", result.history[-1].train_loss if result.history else None),
        ("metrics", report.to_dict()),
        ("history", str(history_path) if history_path else None),
        ("checkpoint", str(checkpoint_path) if checkpoint_path else None),
    ]), report


def _seed_job(args):
    config, seed, prepared, classes, ablation, single, out_dir, level = args
    setup_logging(level)
    try:
        row, report = run_seed(config, seed, prepared, classes, ablation, single, out_dir)
        return seed, row, report, None
    except Exception as exc:  # noqa: BLE001
        logger.debug("graine %d", seed, exc_info=True)
        return seed, None, None, f"{type(exc).__name__}: {exc}"


def run_block(config, name, prepared, classes, ablation=None, single_granularity=False, out_dir=None):
    """
    Exécute toutes les graines d'un bloc et agrège leurs métriques.

    Args:
        config (ExperimentConfig): Configuration
        name (str): Nom du bloc
        prepared (PreparedData): Segments prétraités
        classes (int): Nombre de classes K
        ablation (str, optional): Variante du modèle
        single_granularity (bool): Une granularité par branche
        out_dir (Path, optional): Répertoire du bloc

    Returns:
        dict: Lignes par graine, agrégat et échecs
    """
    seeds = list(config["seeds"])
    level = logging.getLogger().level
    jobs = [(config, seed, prepared, classes, ablation, single_granularity,
             Path(out_dir) / f"seed-{seed}" if out_dir is not None else None, level) for seed in seeds]
    if config["jobs"] > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(config["jobs"], len(jobs))) as pool:
            outcomes = list(pool.map(_seed_job, jobs))
    else:
        outcomes = [_seed_job(job) for job in jobs]

    rows, reports, failures = [], [], []
    for seed, row, report, error in outcomes:
        if error is not None:
            logger.warning("bloc %s, graine %d en échec: %s", name, seed, error)
            failures.append({"block": name, "seed": seed, "error": error})
            continue
        rows.append(row)
        reports.append(report)
    return OrderedDict([
        ("name", name),
        ("seeds", rows),
        ("aggregate", aggregate_reports(reports) if reports else None),
        ("failures", failures),
    ])


def run_experiment(config, out_dir=None):
    """
    Exécute une expérience complète et écrit son rapport JSON.

    Args:
        config (ExperimentConfig): Configuration validée
        out_dir (str | Path, optional): Répertoire de sortie (par défaut output_dir)

    Returns:
        tuple: (rapport, chemin du rapport)
    """
    out_dir = Path(out_dir or config["output_dir"])
    recordings, digest, classes = load_recordings(config)
    base = None
    blocks, failures = [], []
    for name, variable, value, ablation, window_len, overlap, single in _block_plan(config):
        policy = segmentation_policy(config, window_len, overlap)
        if base is None or window_len is not None or overlap is not None:
            prepared = prepare(recordings, policy, config["zscore_per_channel"])
        base = base or prepared
        logger.info("bloc %s (%s = %s)", name, variable, value)
        block = run_block(config, name, prepared, classes, ablation, single, out_dir / _slug(name))
        block["variable"] = variable
        block["value"] = value
        block["segmentation"] = {"window_len": policy.window_len, "overlap_ratio": policy.overlap_ratio,
                                 "stride": policy.stride}
        block["dataset"] = prepared.statistics
        blocks.append(block)
        failures.extend(block["failures"])

    report = OrderedDict([
        ("config", config.to_dict()),
        ("config_source", config.source),
        ("manifest_sha256", digest),
        ("classes", classes),
        ("study", None if config["study"] == "none" else config["study"]),
        ("dataset", base.statistics),
        ("blocks", blocks),
        ("failures", failures),
        ("complete", not failures),
    ])
    path = write_report(report, out_dir / REPORT_NAME)
    return report, path


def _slug(name):
    return name.replace("=", "-").replace(".", "_")


def write_report(report, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report, indent=2, default=_json_default) + "\n", encoding="utf-8")
    logger.info("rapport écrit: %s", path)
    return path


def _json_default(value):
    if hasattr(value, "tolist"):
        return value.tolist()
    if hasattr(value, "item"):
        return value.item()
    raise TypeError(f"valeur non sérialisable: {type(value).__name__}")


def read_report(path):
    """Relit un rapport JSON."""
    return json.loads(Path(path).read_text(encoding="utf-8"))


def evaluate_checkpoint(config, seed_dir):
    """
    Réévalue le point de reprise d'une graine sur sa partition de test.

    Args:
        config (ExperimentConfig): Configuration qui a produit la graine
        seed_dir (str | Path): Répertoire de la graine (model.bin, split.json)

    Returns:
        MetricsReport: Les métriques de test
    """
    seed_dir = Path(seed_dir)
    model_config, params = load_checkpoint(seed_dir / "model.bin")
    split = json.loads((seed_dir / "split.json").read_text(encoding="utf-8"))
    plan = SplitPlan(split["seed"], tuple(split["train"]), tuple(split["val"]), tuple(split["test"]),
                     split.get("stratified", True))
    recordings, _, _ = load_recordings(config)
    policy = segmentation_policy(config, model_config.window_len)
    prepared = prepare(recordings, policy, config["zscore_per_channel"])
    _, _, test_data = split_data(prepared.samples, plan)
    return evaluate(ADformer(model_config, params), plan, test_data, batch_size=config["eval_batch_size"])
