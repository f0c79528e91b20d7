#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from functions.augmentation.augmentation_manager import AugmentationConfig, AugmentationManager, parse_kinds
from functions.augmentation.augmentations import dropout, flip, jitter, mask_channel, mask_freq, mask_time
from functions.errors import ConfigError

ZERO_INTENSITY = [flip, mask_time, mask_freq, mask_channel, jitter, dropout]


@pytest.fixture
def seg(rng):
    return rng.normal(size=(128, 8))


@pytest.mark.parametrize("augmentation", ZERO_INTENSITY, ids=lambda f: f.__name__)
def test_zero_intensity_is_identity(augmentation, seg, rng):
    out = augmentation(seg, 0.0, rng)
    assert out is not seg
    assert np.array_equal(out, seg)


def test_flip_is_an_involution(seg):
    once = flip(seg, 1.0)
    assert np.array_equal(once[0], seg[-1])
    assert np.array_equal(flip(once, 1.0), seg)


def test_mask_time_zeroes_whole_rows(seg, rng):
    out = mask_time(seg, 0.1, rng)
    zero_rows = np.all(out == 0.0, axis=1)
    assert zero_rows.sum() == 13
    assert np.array_equal(out[~zero_rows], seg[~zero_rows])


def test_mask_channel_zeroes_whole_channels(seg, rng):
    out = mask_channel(seg, 0.25, rng)
    zero_cols = np.all(out == 0.0, axis=0)
    assert zero_cols.sum() == 2
    assert np.array_equal(out[:, ~zero_cols], seg[:, ~zero_cols])


def test_mask_freq_stays_real_and_masks_conjugate_pairs(seg, rng):
    out = mask_freq(seg, 0.1, rng)
    assert np.isrealobj(out)
    spectrum = np.fft.fft(out, axis=0)
    original = np.fft.fft(seg, axis=0)
    for c in range(seg.shape[1]):
        masked = np.abs(spectrum[:65, c]) < 1e-9
        # round(0.1 · 65) fréquences, chacune avec sa conjuguée
        assert masked.sum() == 7
        full = original[:, c].copy()
        for k in np.flatnonzero(masked):
            full[k] = 0.0
            full[(128 - k) % 128] = 0.0
        inverse = np.fft.ifft(full)
        assert np.max(np.abs(inverse.imag)) < 1e-12
        assert np.allclose(inverse.real, out[:, c], atol=1e-12)


def test_mask_freq_with_explicit_bins():
    t = np.arange(64)
    seg = np.stack([np.sin(2 * np.pi * 4 * t / 64), np.sin(2 * np.pi * 9 * t / 64)], axis=1)
    out = mask_freq(seg, 0.0, bins=[4])
    assert np.allclose(out[:, 0], 0.0, atol=1e-12)
    assert np.allclose(out[:, 1], seg[:, 1], atol=1e-12)


def test_jitter_and_dropout_ranges(seg, rng):
    noisy = jitter(seg, 0.1, rng)
    assert np.all(noisy - seg >= 0.0) and np.all(noisy - seg < 0.1)
    dropped = dropout(seg, 0.5, rng)
    zero = dropped == 0.0
    assert 0.4 < zero.mean() < 0.6
    assert np.array_equal(dropped[~zero], seg[~zero])


def test_manager_applies_in_canonical_order(seg):
    config = AugmentationConfig(kinds=("jitter", "flip"), prob=1.0, scale=0.1)
    manager = AugmentationManager(config)
    assert manager.get_active_names() == ["flip", "jitter"]
    draw = np.random.default_rng(5)
    expected = jitter(flip(seg, 1.0, draw), 0.1, draw)
    assert np.array_equal(manager.apply(seg, np.random.default_rng(5)), expected)


def test_manager_toggle_and_empty(seg, rng):
    manager = AugmentationManager(AugmentationConfig(kinds=("flip",), prob=1.0))
    manager.toggle("flip", False)
    assert manager.get_active_names() == []
    batch = seg[None]
    assert manager.apply_batch(batch, rng) is batch


def test_apply_batch_draws_independently(seg, rng):
    manager = AugmentationManager(AugmentationConfig(kinds=("jitter",), scale=0.5))
    out = manager.apply_batch(np.stack([seg, seg]), rng)
    assert out.shape == (2,) + seg.shape
    assert not np.array_equal(out[0], out[1])


def test_augmentation_config_validation():
    assert parse_kinds("none") == ()
    assert parse_kinds(" flip , mask_time ") == ("flip", "mask_time")
    with pytest.raises(ConfigError):
        AugmentationConfig(kinds=("rotate",))
    with pytest.raises(ConfigError):
        AugmentationConfig(ratio=1.0)


def test_jitter_shifts_the_mean_by_half_the_scale(seg, rng):
    shift = np.mean(jitter(seg, 0.1, rng) - seg)
    assert abs(shift - 0.05) <= 0.005


def test_dropout_rate_within_three_standard_errors(seg, rng):
    ratio = 0.5
    rate = np.mean(dropout(seg, ratio, rng) == 0.0)
    assert abs(rate - ratio) <= 3 * np.sqrt(ratio * (1 - ratio) / seg.size)


def test_masking_dc_of_constant_signal_gives_zero():
    out = mask_freq(np.full((64, 3), 2.5), 0.0, bins=[0])
    assert np.allclose(out, 0.0, atol=1e-12)


def test_manager_starts_with_configured_kinds():
    manager = AugmentationManager(AugmentationConfig(kinds=("mask_time", "dropout")))
    assert manager.get_active_names() == ["mask_time", "dropout"]
    manager.toggle("rotate", True)
    assert "rotate" not in manager.active
