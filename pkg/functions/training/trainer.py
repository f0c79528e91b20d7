#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Boucle d'entraînement
---------------------
Ce module contient la boucle d'entraînement par époques:

- mini-lots mélangés à chaque époque (générateur initialisé par la graine);
- un pas AdamW par mini-lot, taux d'apprentissage cosinus par époque;
- F1 de validation (niveau échantillon) après chaque époque;
- arrêt précoce après `patience` époques sans amélioration stricte, et retour
  des paramètres de la meilleure époque.
"""

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from config.training_config import (
    ADAM_EPS, BETAS, DESK_BATCH_SIZE, EVAL_BATCH_SIZE, F1_AVERAGE, GRAD_CLIP, LR_MAX, LR_MIN, MAX_EPOCHS, PATIENCE,
    WEIGHT_DECAY,
)
from functions.augmentation.augmentation_manager import AugmentationManager
from functions.errors import ConfigError
from functions.evaluation.metrics import confusion, f1_score
from functions.model.adformer import ADformer, forward, init_parameters, loss
from functions.numerics.tensor import recording
from functions.training.optimizer import AdamState, adamw_step, clip_gradients, cosine_lr

logger = logging.getLogger(__name__)

HISTORY_COLUMNS = ("epoch", "train_loss", "val_f1", "lr")


@dataclass(frozen=True)
class TrainConfig:
    """Protocole d'optimisation."""

    max_epochs: int = MAX_EPOCHS
    patience: int = PATIENCE
    batch_size: int = DESK_BATCH_SIZE
    lr_max: float = LR_MAX
    lr_min: float = LR_MIN
    weight_decay: float = WEIGHT_DECAY
    betas: Tuple[float, float] = BETAS
    eps: float = ADAM_EPS
    seed: int = 41
    grad_clip: Optional[float] = GRAD_CLIP
    f1_average: str = F1_AVERAGE
    eval_batch_size: int = EVAL_BATCH_SIZE
    progress: bool = True

    def __post_init__(self):
        if self.max_epochs < 1:
            raise ConfigError("nombre d'époques invalide", key="max_epochs", value=self.max_epochs, constraint=">= 1")
        if not 0 < self.patience < self.max_epochs:
            raise ConfigError("patience invalide", key="patience", value=self.patience,
                              constraint=f"dans [1, max_epochs={self.max_epochs})")
        if self.batch_size < 1:
            raise ConfigError("taille de lot invalide", key="batch_size", value=self.batch_size, constraint=">= 1")
        if self.lr_max <= 0 or not 0 <= self.lr_min <= self.lr_max:
            raise ConfigError("taux d'apprentissage invalide", key="lr_min", value=(self.lr_min, self.lr_max),
                              constraint="0 <= lr_min <= lr_max, lr_max > 0")
        if self.weight_decay < 0:
            raise ConfigError("décroissance invalide", key="weight_decay", value=self.weight_decay, constraint=">= 0")
        if not all(0 <= b < 1 for b in self.betas):
            raise ConfigError("betas invalides", key="betas", value=self.betas, constraint="dans [0, 1)")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ConfigError("écrêtage invalide", key="grad_clip", value=self.grad_clip, constraint="> 0")
        if self.f1_average not in ("macro", "weighted"):
            raise ConfigError("moyenne F1 inconnue", key="f1_average", value=self.f1_average,
                              constraint="macro ou weighted")


class EarlyStopping:
    """
    Règle d'arrêt précoce.
    Une époque améliore si son score dépasse strictement le meilleur score;
    l'arrêt est demandé quand `patience` époques consécutives n'ont pas amélioré.
    """

    def __init__(self, patience):
        """
        Initialise la règle.

        Args:
            patience (int): Nombre d'époques sans amélioration tolérées
        """
        self.patience = patience
        self.best_score = -np.inf
        self.best_epoch = 0
        self.epochs_since_best = 0

    def update(self, epoch, score):
        """
        Enregistre le score d'une époque.

        Args:
            epoch (int): Numéro d'époque (à partir de 1)
            score (float): Score de validation

        Returns:
            bool: L'époque est la nouvelle meilleure
        """
        if score > self.best_score:
            self.best_score = score
            self.best_epoch = epoch
            self.epochs_since_best = 0
            return True
        self.epochs_since_best += 1
        return False

    @property
    def should_stop(self):
        return self.epochs_since_best >= self.patience


@dataclass
class EpochRecord:
    epoch: int
    train_loss: float
    val_f1: float
    lr: float


@dataclass
class TrainState:
    """État courant de l'entraînement."""

    epoch: int
    stopper: EarlyStopping
    optimizer: AdamState
    rng: np.random.Generator

    @property
    def best_val_f1(self):
        return self.stopper.best_score

    @property
    def epochs_since_best(self):
        return self.stopper.epochs_since_best


@dataclass
class TrainResult:
    """Paramètres de la meilleure époque et historique."""

    params: object
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_f1: float = 0.0
    stopped_early: bool = False


def validation_f1(config, params, data, average=F1_AVERAGE, batch_size=EVAL_BATCH_SIZE):
    """F1 au niveau échantillon sur un ensemble de validation (mode évaluation)."""
    preds = ADformer(config, params).predict(data.X, batch_size=batch_size)
    return f1_score(confusion(data.labels, preds, config.classes), average)


def train(model_config, train_config, train_data, val_data, params=None,
          validate: Optional[Callable] = None, history_path=None):
    """
    Entraîne le modèle avec arrêt précoce sur le F1 de validation.

    Args:
        model_config (ModelConfig): Configuration du modèle
        train_config (TrainConfig): Protocole d'optimisation
        train_data (SegmentArray): Segments d'entraînement
        val_data (SegmentArray): Segments de validation
        params (ParameterSet, optional): Paramètres initiaux. Par défaut initialisés avec la graine.
        validate (callable, optional): validate(epoch, params) -> score. Par défaut le F1 échantillon.
        history_path (str | Path, optional): Fichier TSV de l'historique

    Returns:
        TrainResult: Paramètres de la meilleure époque et historique
    """
    if len(train_data) == 0 or len(val_data) == 0:
        raise ConfigError("partition vide", key="split_ratio",
                          value=(len(train_data), len(val_data)), constraint="train et validation non vides")
    if validate is None:
        def validate(epoch, current):
            return validation_f1(model_config, current, val_data, train_config.f1_average,
                                 train_config.eval_batch_size)

    params = params if params is not None else init_parameters(model_config, train_config.seed)
    shuffle_seq = np.random.SeedSequence(train_config.seed)
    augment_seq = np.random.SeedSequence((model_config.augmentation.rng_seed, train_config.seed))
    state = TrainState(epoch=0, stopper=EarlyStopping(train_config.patience),
                       optimizer=AdamState(train_config.betas, train_config.eps, train_config.weight_decay),
                       rng=np.random.default_rng(shuffle_seq))
    augment_rng = np.random.default_rng(augment_seq)
    augmenter = AugmentationManager(model_config.augmentation)
    result = TrainResult(params=params)
    best_state = params.state()
    n = len(train_data)

    epochs = tqdm(range(train_config.max_epochs), desc=f"graine {train_config.seed}",
                  disable=not train_config.progress, leave=False)
    for e in epochs:
        state.epoch = e + 1
        lr = cosine_lr(e, train_config.max_epochs, train_config.lr_max, train_config.lr_min)
        order = state.rng.permutation(n)
        total = 0.0
        for start in range(0, n, train_config.batch_size):
            rows = order[start:start + train_config.batch_size]
            total += train_step(model_config, train_config, params, state.optimizer, train_data.X[rows],
                                train_data.labels[rows], lr, augment_rng, augmenter) * len(rows)
        train_loss = total / n

        score = float(validate(state.epoch, params))
        if state.stopper.update(state.epoch, score):
            best_state = params.state()
        result.history.append(EpochRecord(state.epoch, train_loss, score, lr))
        epochs.set_postfix(loss=f"{train_loss:.4f}", val_f1=f"{score:.4f}")
        logger.info("époque %d: perte %.5f, F1 validation %.4f, lr %.2e", state.epoch, train_loss, score, lr)
        if state.stopper.should_stop:
            result.stopped_early = True
            logger.info("arrêt précoce à l'époque %d (meilleure: %d, F1 %.4f)",
                        state.epoch, state.stopper.best_epoch, state.stopper.best_score)
            break

    params.load_state(best_state)
    result.best_epoch = state.stopper.best_epoch
    result.best_val_f1 = state.stopper.best_score
    if history_path is not None:
        write_history_tsv(history_path, result.history)
    return result


def train_step(model_config, train_config, params, optimizer, X, y, lr, rng=None, augmenter=None):
    """
    Un pas d'optimisation sur un mini-lot.

    Args:
        model_config (ModelConfig): Configuration du modèle
        train_config (TrainConfig): Protocole (écrêtage)
        params (ParameterSet): Paramètres (mis à jour en place)
        optimizer (AdamState): État de l'optimiseur
        X (ndarray): Lot [B, T, C]
        y (ndarray): Étiquettes [B]
        lr (float): Taux d'apprentissage
        rng (numpy.random.Generator, optional): Générateur des augmentations
        augmenter (AugmentationManager, optional): Augmentations

    Returns:
        float: Perte du mini-lot avant le pas
    """
    with recording() as tape:
        value = loss(forward(X, model_config, params, train_mode=True, rng=rng, augmenter=augmenter), y)
        tape.backward(value)
        grads, norm = clip_gradients(params.grads(), train_config.grad_clip)
        logger.debug("perte %.6f, norme du gradient %.4f", value.item(), norm)
        adamw_step(params, grads, optimizer, lr)
        tape.clear()
    params.zero_grad()
    return value.item()


def write_history_tsv(path, history):
    """
    Écrit l'historique d'entraînement (epoch, train_loss, val_f1, lr) en TSV.

    Args:
        path (str | Path): Fichier de sortie
        history (list): EpochRecord
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, delimiter="\t", lineterminator="\n")
        writer.writerow(HISTORY_COLUMNS)
        for record in history:
            writer.writerow([record.epoch, repr(record.train_loss), repr(record.val_f1), repr(record.lr)])
