#!/usr/bin/env python3
# -*- coding: utf-8 -*-

from dataclasses import replace

import numpy as np
import pytest

from functions.augmentation.augmentation_manager import AugmentationConfig
from functions.errors import ConfigError, ParameterError
from functions.experiments.oracles import tiny_model_config, tiny_model_gradcheck
from functions.model.adformer import ADformer, encode, forward, init_parameters, loss, parameter_census
from functions.model.checkpoint import decode_tensors, encode_tensors, load_checkpoint, manifest_path, save_checkpoint
from functions.numerics.tensor import Tensor, no_recording, recording


def test_forward_gives_finite_logits(tiny_config, tiny_params, rng):
    logits = forward(rng.normal(size=(5, 16, 4)), tiny_config, tiny_params)
    assert logits.shape == (5, 2)
    assert np.all(np.isfinite(logits.data))
    single = forward(rng.normal(size=(16, 4)), tiny_config, tiny_params)
    assert single.shape == (1, 2)


@pytest.mark.parametrize("ablation, rows", [("full", 4), ("no_inter", 4), ("no_temporal", 2), ("no_spatial", 2)])
def test_representation_rows(ablation, rows, rng):
    config = tiny_model_config(ablation)
    rep = encode(rng.normal(size=(2, 16, 4)), config, init_parameters(config, seed=1))
    assert rep.h.shape == (2, rows, 8)
    assert rep.rows == config.router_rows


def test_forward_is_deterministic(tiny_config, rng):
    x = rng.normal(size=(3, 16, 4))
    first = forward(x, tiny_config, init_parameters(tiny_config, seed=9)).data
    second = forward(x, tiny_config, init_parameters(tiny_config, seed=9)).data
    assert np.array_equal(first, second)


def test_wrong_input_shape_raises(tiny_config, tiny_params):
    with pytest.raises(ConfigError):
        forward(np.zeros((2, 16, 5)), tiny_config, tiny_params)


def test_loss_examples():
    assert np.isclose(loss(Tensor(np.zeros(2)), 0).item(), np.log(2.0))
    assert loss(Tensor([100.0, -100.0]), 0).item() < 1e-12
    assert np.isclose(loss(Tensor([100.0, -100.0]), 1).item(), 200.0)
    with pytest.raises(ParameterError):
        loss(Tensor([0.0, 0.0]), 2)


def test_loss_gradient_is_softmax_minus_onehot(rng):
    logits = Tensor(rng.normal(size=(4, 3)), requires_grad=True)
    labels = np.array([0, 2, 1, 2])
    with recording():
        loss(logits, labels).backward()
    probs = np.exp(logits.data) / np.exp(logits.data).sum(axis=1, keepdims=True)
    expected = (probs - np.eye(3)[labels]) / 4
    assert np.allclose(logits.grad, expected, atol=1e-12)


def test_parameter_census(tiny_config, tiny_params):
    census = parameter_census(tiny_config)
    assert census["temporal.embed.0.proj"] == 2 * 4 * 8
    assert census["spatial.embed.1.w1"] == 8 * 4
    assert census["spatial.embed.1.w2"] == 16 * 8
    assert census["temporal.layer0.intra"] == 4 * 8 * 8 + 4 * 8
    assert census["spatial.layer0.ffn"] == 8 * 16 + 16 + 16 * 8 + 8
    assert census["temporal.layer0.norm_inter"] == 2 * 8
    assert census["classifier"] == 4 * 8 * 2 + 2
    assert sum(census.values()) == tiny_params.count()


def test_census_follows_ablation():
    no_spatial = parameter_census(tiny_model_config("no_spatial"))
    assert not any(group.startswith("spatial.") for group in no_spatial)
    no_inter = parameter_census(tiny_model_config("no_inter"))
    assert not any(".inter" in group or "norm_inter" in group for group in no_inter)
    assert sum(no_inter.values()) < sum(parameter_census(tiny_model_config()).values())


def test_end_to_end_gradient():
    error, elapsed = tiny_model_gradcheck(seed=0, n_coords=200)
    assert error < 1e-4
    assert elapsed >= 0.0


def test_end_to_end_gradient_without_inter():
    error, _ = tiny_model_gradcheck(seed=1, n_coords=100, ablation="no_inter")
    assert error < 1e-4


def test_no_inter_keeps_granularities_apart(rng):
    config = tiny_model_config("no_inter")
    params = init_parameters(config, seed=2)
    x = rng.normal(size=(2, 16, 4))
    with no_recording():
        before = encode(x, config, params).h.data
        params["temporal.embed.1.proj"].data = params["temporal.embed.1.proj"].data + 0.5
        after = encode(x, config, params).h.data
    # Lignes: routeurs temporels 0 et 1, puis spatiaux 0 et 1
    assert np.array_equal(before[:, [0, 2, 3]], after[:, [0, 2, 3]])
    assert not np.allclose(before[:, 1], after[:, 1])


def test_full_model_mixes_granularities(rng):
    config = tiny_model_config()
    params = init_parameters(config, seed=2)
    x = rng.normal(size=(2, 16, 4))
    with no_recording():
        before = encode(x, config, params).h.data
        params["temporal.embed.1.proj"].data = params["temporal.embed.1.proj"].data + 0.5
        after = encode(x, config, params).h.data
    assert not np.allclose(before[:, 0], after[:, 0])
    assert np.array_equal(before[:, 2:], after[:, 2:])


def test_predict_proba_rows_sum_to_one(tiny_config, rng):
    model = ADformer(tiny_config, seed=4)
    probs = model.predict_proba(rng.normal(size=(7, 16, 4)), batch_size=3)
    assert probs.shape == (7, 2)
    assert np.allclose(probs.sum(axis=1), 1.0)
    assert np.array_equal(model.predict(rng.normal(size=(0, 16, 4))), np.zeros(0, dtype=np.int64))


def test_checkpoint_is_bit_identical(tmp_path, tiny_config, tiny_params, rng):
    path = tmp_path / "seed-41" / "model.bin"
    save_checkpoint(path, tiny_params, tiny_config)
    assert manifest_path(path).exists()
    config, params = load_checkpoint(path)
    assert config == tiny_config
    assert params.names() == tiny_params.names()
    for name in params.names():
        assert np.array_equal(params[name].data, tiny_params[name].data)
    x = rng.normal(size=(3, 16, 4))
    assert np.array_equal(ADformer(config, params).predict_proba(x), ADformer(tiny_config, tiny_params).predict_proba(x))


def test_truncated_checkpoint_raises(tiny_params):
    blob = encode_tensors(tiny_params.state())
    assert list(decode_tensors(blob)) == tiny_params.names()
    with pytest.raises(ParameterError):
        decode_tensors(blob[:-3])


def test_augmentations_only_apply_in_training_mode(tiny_params, rng):
    plain = tiny_model_config()
    augmented = replace(plain, augmentation=AugmentationConfig(kinds=("jitter", "mask_time"), scale=0.5))
    x = rng.normal(size=(3, 16, 4))
    with no_recording():
        eval_plain = forward(x, plain, tiny_params).data
        eval_augmented = forward(x, augmented, tiny_params).data
        train_plain = forward(x, plain, tiny_params, train_mode=True).data
        train_augmented = forward(x, augmented, tiny_params, train_mode=True).data
    assert np.array_equal(eval_plain, eval_augmented)
    assert np.array_equal(eval_plain, train_plain)
    assert not np.allclose(eval_plain, train_augmented)
