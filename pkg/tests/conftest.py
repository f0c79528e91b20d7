#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""Fixtures partagées des tests."""

import numpy as np
import pytest

from data.datasets import SegmentArray
from data.synthetic import synth_generate
from functions.augmentation.augmentation_manager import AugmentationConfig
from functions.experiments.oracles import tiny_model_config
from functions.model.adformer import ModelConfig, init_parameters
from functions.model.embedding import GranularitySpec
from functions.preprocessing.pipeline import prepare
from functions.preprocessing.segmentation import SegmentationPolicy


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_config():
    return tiny_model_config()


@pytest.fixture
def tiny_params(tiny_config):
    return init_parameters(tiny_config, seed=3)


@pytest.fixture
def wide_config():
    """Granularités [2, 4, 8] sur T=128 (N = 64, 32, 16), petit D."""
    spec = GranularitySpec(patch_lengths=(2, 4, 8), scaled_channels=(4, 8, 16), model_dim=8)
    return ModelConfig(spec=spec, channels=4, window_len=128, layers=1, heads=2, d_ff=16, classes=2,
                       augmentation=AugmentationConfig(kinds=()))


@pytest.fixture
def small_samples():
    """Segments synthétiques z-scorés: 8 sujets, 2 classes, 4 canaux, T=16."""
    recordings = synth_generate(n_subjects=8, classes=2, channels=4, rate_hz=128.0, duration_s=1.0, seed=41)
    policy = SegmentationPolicy(window_len=16, overlap_ratio=0.5, target_rate_hz=128.0, bandpass=None)
    return prepare(recordings, policy).samples


@pytest.fixture
def random_samples(rng):
    def build(n=24, T=16, C=4, subjects=6, classes=2):
        subject_ids = np.array([f"s{i % subjects}" for i in range(n)], dtype=object)
        labels = np.array([(i % subjects) % classes for i in range(n)], dtype=np.int64)
        return SegmentArray(rng.normal(size=(n, T, C)), labels, subject_ids)
    return build
