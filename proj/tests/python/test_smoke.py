"""Smoke tests for the Python bindings."""

import json
import math

import numpy as np
import pytest

import avst

TINY = {
    "seed": 5,
    "corpus": {"synthetic": {"num_speakers": 3, "utterances_per_speaker": 12}},
    "architecture": {"hidden_width": 16},
    "train": {"max_epochs": 2},
    "adapt": {"max_epochs": 1},
    "cells": ["si/a/two", "st-a/a/two"],
}


def test_log_mel_and_context_shapes():
    t = np.arange(16000) / 16000.0
    x = 0.5 * np.sin(2 * math.pi * 440.0 * t)
    feats = avst.log_mel(x)
    assert feats.shape[1] == 40
    assert abs(feats.shape[0] - 100) <= 2
    assert avst.stack_context(feats, 5).shape == (feats.shape[0], 440)
    assert avst.acoustic_features(x).shape == (feats.shape[0], 440)
    norm = avst.normalize_features(feats)
    assert np.allclose(norm.mean(axis=0), 0.0, atol=1e-9)


def test_mixing_is_sample_wise():
    rng = np.random.default_rng(0)
    t = rng.uniform(-1, 1, 800)
    b = rng.uniform(-1, 1, 500)
    m = np.asarray(avst.mix_waveforms(t, b))
    padded = np.concatenate([b, np.zeros(300)])
    assert np.array_equal(m, 0.5 * (t + padded))


def test_wer():
    r = avst.compute_wer("bin blue at f two now".split(), "bin blue at g two now".split())
    assert (r.substitutions, r.deletions, r.insertions, r.reference_words) == (1, 0, 0, 6)
    assert f"{100 * r.wer:.1f}" == "16.7"
    assert avst.compute_wer(["a", "b"], []).wer == 1.0


def test_decode_one_hot():
    grammar = "command: go stop\n"
    lexicon = "go 0 1\nstop 2 3\n"
    post = np.full((8, 4), 1e-3)
    for f, p in enumerate([2, 2, 2, 2, 3, 3, 3, 3]):
        post[f, p] = 1.0
    post /= post.sum(axis=1, keepdims=True)
    words, score = avst.decode(post, grammar, lexicon)
    assert words == ["stop"]
    assert score < 0


def test_errors_map_to_exception_classes():
    with pytest.raises(avst.UsageError):
        avst.log_mel(np.zeros(100), num_bins=0)
    with pytest.raises(avst.DataError):
        avst.load_model("/nonexistent/model.dnnm")
    with pytest.raises(avst.UsageError):
        avst.run_matrix({"train": {"max_epoch": 2}})


def test_model_extension_preserves_outputs(tmp_path):
    si = avst.init_model("a", hidden_width=16, labels=5, seed=3)
    rng = np.random.default_rng(1)
    x = rng.normal(size=(20, si.input_dim))
    ext = avst.extend_for_identity(si, "a", num_speakers=4)
    ident = np.zeros((20, 4))
    ident[np.arange(20), rng.integers(0, 4, 20)] = 1.0
    p = si.predict(x)
    q = ext.predict(np.hstack([x, ident]))
    assert np.array_equal(p, q)
    assert np.allclose(p.sum(axis=1), 1.0, atol=1e-6)
    path = str(tmp_path / "si.dnnm")
    si.save(path)
    assert np.array_equal(avst.load_model(path).predict(x), p)


def test_train_adapt_and_matrix(tmp_path):
    cfg = json.dumps(TINY)
    si = avst.train_si(cfg, "a", "two")
    assert si.provenance.startswith("si")
    st = avst.adapt_st(cfg, si, "a", "two")
    assert st.input_dim == si.input_dim + 3
    sd = avst.adapt_sd(cfg, si, 1, "two")
    assert sd.input_dim == si.input_dim
    a = avst.run_matrix(TINY, out_dir=str(tmp_path / "r1"))
    b = avst.run_matrix(TINY)
    assert a == b
    assert [c["cell"] for c in a["cells"]] == ["si/a/two", "st-a/a/two"]
    assert (tmp_path / "r1" / "report.json").exists()


def test_synthesize(tmp_path):
    n = avst.synthesize(str(tmp_path / "corpus"), json.dumps(TINY))
    assert n == 36
    assert (tmp_path / "corpus" / "manifest.jsonl").exists()
    assert (tmp_path / "corpus" / "splits.json").exists()
    assert json.loads(avst.default_config())["corpus"]["synthetic"]["num_speakers"] >= 4
