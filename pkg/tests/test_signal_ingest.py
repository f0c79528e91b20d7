#!/usr/bin/env python3
# -*- coding: utf-8 -*-

import numpy as np
import pytest

from data.datasets import apply_task, dataset_statistics
from data.recordings import Recording, Segment, manifest_hash, read_dataset, write_dataset
from data.synthetic import synth_generate
from functions.errors import ConfigError, ParameterError, UnsupportedError
from functions.numerics.spectral import dominant_frequency
from functions.preprocessing.filters import bandpass, resample
from functions.preprocessing.pipeline import prepare
from functions.preprocessing.segmentation import SegmentationPolicy, segment, segment_count, zscore


def tone(freq, rate=128.0, seconds=60.0, channels=1):
    t = np.arange(int(rate * seconds)) / rate
    return Recording("sub-001", 0, rate, np.tile(np.sin(2 * np.pi * freq * t), (channels, 1)))


def rms_db(before, after):
    mid = slice(before.shape[-1] // 3, 2 * before.shape[-1] // 3)
    return 20 * np.log10(np.sqrt(np.mean(after[..., mid] ** 2)) / np.sqrt(np.mean(before[..., mid] ** 2)))


def test_bandpass_rejects_slow_drift_and_keeps_alpha():
    slow = tone(0.2)
    assert rms_db(slow.series, bandpass(slow, 0.5, 45.0).series) <= -20.0
    alpha = tone(10.0)
    filtered = bandpass(alpha, 0.5, 45.0)
    assert filtered.samples == alpha.samples
    assert abs(rms_db(alpha.series, filtered.series)) <= 1.0


def test_bandpass_zero_and_invalid_band():
    zero = Recording("sub-001", 0, 128.0, np.zeros((2, 2000)))
    assert np.array_equal(bandpass(zero, 0.5, 45.0).series, zero.series)
    with pytest.raises(ParameterError):
        bandpass(zero, 0.5, 70.0)
    with pytest.raises(ParameterError):
        bandpass(zero, 10.0, 5.0)


def test_resample_cases():
    rec = tone(5.0, rate=256.0, seconds=10.0)
    assert resample(rec, 128.0).samples == rec.samples // 2
    assert resample(rec, 256.0) is rec
    with pytest.raises(UnsupportedError):
        resample(rec, 512.0)


def test_resample_rational_keeps_peak():
    rec = tone(5.0, rate=500.0, seconds=10.0)
    out = resample(rec, 128.0)
    assert out.samples == round(rec.samples * 128 / 500)
    assert out.sampling_rate_hz == 128.0
    assert abs(dominant_frequency(out.series[0], 128.0) - 5.0) <= 128.0 / out.samples


@pytest.mark.parametrize("samples, window, overlap, expected", [
    (1280, 128, 0.5, 19),
    (128, 128, 0.0, 1),
    (128, 128, 0.8, 1),
    (100, 128, 0.5, 0),
])
def test_segment_counts(samples, window, overlap, expected):
    rec = Recording("sub-001", 1, 128.0, np.zeros((3, samples)))
    segments = segment(rec, SegmentationPolicy(window, overlap, 128.0, None))
    assert len(segments) == expected
    assert [s.window_index for s in segments] == list(range(expected))
    assert all(s.subject_id == "sub-001" and s.label == 1 and s.data.shape == (window, 3) for s in segments)


def test_segment_count_matches_window_walker(rng):
    for _ in range(500):
        S, T = int(rng.integers(1, 400)), int(rng.integers(2, 100))
        r = float(rng.uniform(0.0, 0.7))
        policy = SegmentationPolicy(T, r, 128.0, None)
        walked, start = 0, 0
        while start + T <= S:
            walked += 1
            start += policy.stride
        assert segment_count(S, T, policy.stride) == walked


def test_segment_windows_follow_stride():
    series = np.arange(20, dtype=float)[None, :]
    segments = segment(Recording("a", 0, 128.0, series), SegmentationPolicy(8, 0.5, 128.0, None))
    assert [s.data[0, 0] for s in segments] == [0.0, 4.0, 8.0, 12.0]


def test_overlap_one_is_rejected():
    with pytest.raises(ConfigError):
        SegmentationPolicy(128, 1.0)


def test_zscore_examples(rng):
    constant = Segment("a", 0, np.full((10, 3), 4.2))
    assert np.array_equal(zscore(constant).data, np.zeros((10, 3)))
    small = zscore(Segment("a", 0, np.array([[-1.0], [0.0], [1.0]])))
    assert np.allclose(small.data[:, 0], [-1.2247, 0.0, 1.2247], atol=1e-4)
    seg = zscore(Segment("a", 0, rng.normal(3.0, 2.0, size=(128, 4))))
    assert abs(seg.data.mean()) < 1e-9
    assert abs(seg.data.std() - 1.0) < 1e-6
    again = zscore(seg)
    assert np.allclose(again.data, seg.data, atol=1e-6)


def test_zscore_per_channel(rng):
    x = rng.normal(size=(64, 3)) * np.array([1.0, 5.0, 0.1]) + np.array([0.0, 10.0, -3.0])
    out = zscore(Segment("a", 0, x), per_channel=True).data
    assert np.allclose(out.mean(axis=0), 0.0, atol=1e-9)
    assert np.allclose(out.std(axis=0), 1.0, atol=1e-6)


def test_synth_generate_is_deterministic_and_labelled():
    first = synth_generate(n_subjects=10, classes=2, channels=4, duration_s=4.0, seed=41)
    second = synth_generate(n_subjects=10, classes=2, channels=4, duration_s=4.0, seed=41)
    assert all(np.array_equal(a.series, b.series) for a, b in zip(first, second))
    assert len({rec.subject_id for rec in first}) == 10
    bin_width = 128.0 / first[0].samples
    class0 = next(rec for rec in first if rec.label == 0)
    class1 = next(rec for rec in first if rec.label == 1)
    assert abs(dominant_frequency(class0.series[0], 128.0) - 5.0) <= bin_width
    assert abs(dominant_frequency(class1.series[0], 128.0) - 10.0) <= bin_width


def test_dataset_on_disk(tmp_path):
    recordings = synth_generate(n_subjects=4, classes=2, channels=3, duration_s=2.0, seed=7)
    write_dataset(tmp_path, recordings)
    loaded = read_dataset(tmp_path)
    assert [r.subject_id for r in loaded] == [r.subject_id for r in recordings]
    assert [r.label for r in loaded] == [r.label for r in recordings]
    # Valeurs stockées en flottants 32 bits
    assert np.allclose(loaded[0].series, recordings[0].series, atol=1e-6)
    header = (tmp_path / "sub-001.rec").read_bytes().split(b"\n", 1)[0].decode("utf-8")
    assert header.split(",")[:3] == ["sub-001", "0", "3"]
    assert len(manifest_hash(tmp_path)) == 64


def test_binary_task_keeps_two_classes():
    recordings = synth_generate(n_subjects=9, classes=3, channels=2, duration_s=2.0, seed=1)
    binary = apply_task(recordings, "binary_ad_hc", (2, 0))
    assert len(binary) == 6
    assert {r.label for r in binary} == {0, 1}
    assert all(r.label == 0 for r in binary if r.subject_id in {"sub-003", "sub-006", "sub-009"})
    with pytest.raises(ConfigError):
        apply_task(recordings, "triage")


def test_prepare_statistics_and_dropped_recordings():
    recordings = synth_generate(n_subjects=4, classes=2, channels=2, duration_s=2.0, seed=3)
    recordings.append(Recording("short", 1, 128.0, np.zeros((2, 50))))
    prepared = prepare(recordings, SegmentationPolicy(128, 0.5, 128.0, None))
    assert prepared.dropped == 1
    assert len(prepared.samples) == 4 * 3
    assert set(prepared.samples.subjects) == {"sub-001", "sub-002", "sub-003", "sub-004"}
    stats = dataset_statistics(recordings, prepared.samples, prepared.dropped)
    assert stats["per_class"]["0"] == {"subjects": 2, "samples": 6}
    assert stats["dropped_recordings"] == 1
