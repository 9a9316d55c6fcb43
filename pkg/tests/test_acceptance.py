"""Acceptance criteria, one test each; every test records a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the summary section
"acceptance criteria" lists the outcome and the measured quantities.
"""
import collections
import json
import random
import time

import numpy as np
import pytest

from oracles import (
    all_sequences,
    difference_oracle,
    edit_distances_from,
    expansion_oracle,
    jacobi_eigh,
    pooling_oracle,
)
from pmc.cli import main
from pmc.config import Config
from pmc.evaluate import batch_score, levenshtein
from pmc.frameio import Video, load_video
from pmc.model import (
    Vocabulary,
    classify,
    fit_pca,
    reconstruction,
    reconstruction_error,
    train_vocabulary,
)
from pmc.motion import BagOfFrames, bag_of_frames, difference_images, expand_motion, pool
from pmc.pipeline import load_spans, predict_videos


def as_bag(m):
    return BagOfFrames(np.asarray(m, dtype=float), (1, np.shape(m)[1]))


def run_batch(manifest, vocab, cfg, spans=None):
    items = [(t.path, manifest.resolve(t.path)) for t in manifest.test]
    preds = predict_videos(items, vocab, cfg, spans)
    assert all(p.error is None for p in preds), [p.error for p in preds if p.error]
    return preds, batch_score(manifest, {p.video: list(p.labels) for p in preds})


def test_c1_pca_round_trip(acceptance):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst = 0.0
    for trial in range(200):
        q, nb = int(rng.integers(3, 31)), int(rng.integers(4, 769))
        if trial % 2:
            r = int(rng.integers(1, min(q - 1, nb) + 1))
            m = rng.random((q, r)) @ rng.random((r, nb))
        else:
            m = rng.random((q, nb))
        centered = m - m.mean(axis=0)
        rank = np.linalg.matrix_rank(centered)
        model = fit_pca(as_bag(m), rank)
        assert model.n_components == rank
        worst = max(worst, reconstruction_error(as_bag(m), model))
    elapsed = time.perf_counter() - t0
    acceptance("C1 PCA round trip", worst < 1e-8 and elapsed < 10,
               f"max error {worst:.2e}, {elapsed:.2f}s")


def test_c2_truncation_oracle(acceptance):
    rng = np.random.default_rng(102)
    worst = 0.0
    for _ in range(200):
        q, nb = int(rng.integers(4, 25)), int(rng.integers(3, 40))
        m = rng.random((q, nb))
        rank = min(q - 1, nb)
        c = int(rng.integers(1, rank))
        model = fit_pca(as_bag(m), c)
        # independent basis from the eigenvectors of the centered Gram matrix
        mu = m.mean(axis=0)
        values, vectors = np.linalg.eigh((m - mu).T @ (m - mu))
        v = vectors[:, np.argsort(values)[::-1][:c]]
        test = np.vstack([m, rng.random((5, nb))])
        expected = (test - mu) @ v @ v.T + mu
        worst = max(worst, np.abs(reconstruction(as_bag(test), model) - expected).max())
    acceptance("C2 truncation equivalence", worst <= 1e-9, f"max deviation {worst:.2e}")


def test_c3_svd_vs_jacobi(acceptance):
    rng = np.random.default_rng(103)
    worst = 0.0
    for _ in range(100):
        q, nb = int(rng.integers(2, 7)), int(rng.integers(1, 6))
        m = rng.random((q, nb))
        model = fit_pca(as_bag(m), nb)
        centered = m - m.mean(axis=0)
        values, vectors = jacobi_eigh((centered.T @ centered).tolist())
        vectors = np.array(vectors)
        for k in range(model.n_components):
            worst = max(worst, abs(model.singular_values[k] - np.sqrt(max(values[k], 0.0))))
            u = model.components[:, k]
            worst = max(worst, min(np.abs(u - vectors[:, k]).max(), np.abs(u + vectors[:, k]).max()))
    acceptance("C3 SVD vs Jacobi", worst <= 1e-9, f"max deviation {worst:.2e}")


def test_c4_motion_oracles(acceptance):
    rng = np.random.default_rng(104)
    diff_bad = expand_bad = 0
    pool_worst = 0.0
    for _ in range(100):
        n, h, w = int(rng.integers(2, 7)), int(rng.integers(1, 13)), int(rng.integers(1, 13))
        frames = rng.random((n, h, w))
        d = difference_images(Video(frames))
        diff_bad += d.tolist() != difference_oracle(frames.tolist())

        img = rng.random((int(rng.integers(1, 16)), int(rng.integers(1, 16))))
        tau = int(rng.integers(0, min(img.shape)))
        expand_bad += expand_motion(img, tau).tolist() != expansion_oracle(img.tolist(), tau)

        img = rng.random((int(rng.integers(1, 30)), int(rng.integers(1, 30))))
        rows, cols = int(rng.integers(1, img.shape[0] + 1)), int(rng.integers(1, img.shape[1] + 1))
        got = pool(img, (rows, cols))
        pool_worst = max(pool_worst, np.abs(got - pooling_oracle(img.tolist(), rows, cols)).max())
    acceptance("C4 motion oracles", diff_bad == 0 and expand_bad == 0 and pool_worst <= 1e-12,
               f"difference mismatches {diff_bad}, expansion mismatches {expand_bad}, "
               f"pooling max deviation {pool_worst:.1e}")


def test_c5_scale_equivariance(make_batch, acceptance):
    # amplitude 0.4 keeps the doubled intensities inside [0, 1]
    m, root = make_batch(n_gestures=6, frame_height=60, frame_width=80, frames_per_gesture=20,
                         n_test=12, max_gestures=3, blob_sigma=4.0, amplitude=0.4,
                         noise_sigma=0.01, seed=5)
    cfg = Config()
    spans = load_spans(root / "segments.json")
    train = [load_video(m.resolve(p)) for p, _ in m.train]
    tests = [(load_video(m.resolve(t.path)), spans[t.path]) for t in m.test]

    def errors(alpha):
        models = [fit_pca(bag_of_frames(Video(v.frames * alpha), cfg.tau, cfg.gamma), cfg.components)
                  for v in train]
        vocab = Vocabulary(tuple(models), cfg)
        out = []
        for video, cuts in tests:
            scaled = Video(video.frames * alpha)
            for a, b in cuts:
                out.append(classify(bag_of_frames(scaled.clip(a, b), cfg.tau, cfg.gamma), vocab))
        return out

    base = errors(1.0)
    worst, flips = 0.0, 0
    for alpha in (0.25, 0.5, 2.0):
        for (l1, e1), (la, ea) in zip(base, errors(alpha)):
            worst = max(worst, np.max(np.abs(ea - alpha * e1) / (alpha * e1)))
            flips += l1 != la
    acceptance("C5 scale equivariance", worst <= 1e-9 and flips == 0,
               f"max relative deviation {worst:.1e}, label changes {flips}")


def test_c6_levenshtein_exhaustive(acceptance):
    alphabet = (0, 1, 2)
    seqs = list(all_sequences(alphabet, 4))
    mismatches = 0
    for a in seqs:
        dist = edit_distances_from(a, alphabet, 4)
        mismatches += sum(levenshtein(a, b) != dist[b] for b in seqs)
    rnd = random.Random(106)
    violations = 0
    for _ in range(1000):
        a, b, c = ([rnd.randrange(5) for _ in range(rnd.randint(0, 8))] for _ in range(3))
        ab = levenshtein(a, b)
        violations += not (
            ab == levenshtein(b, a) and (ab == 0) == (a == b) and ab >= 0
            and levenshtein(a, c) <= ab + levenshtein(b, c)
        )
    acceptance("C6 Levenshtein", mismatches == 0 and violations == 0,
               f"{len(seqs) ** 2} pairs, mismatches {mismatches}, metric violations {violations}")


@pytest.mark.slow
def test_c7_noise_free_batch(make_batch, acceptance):
    m, root = make_batch(n_gestures=8, n_test=40, max_gestures=1, seed=7)
    cfg = Config()
    t0 = time.perf_counter()
    vocab = train_vocabulary(m, cfg)
    _, report = run_batch(m, vocab, cfg, load_spans(root / "segments.json"))
    elapsed = time.perf_counter() - t0
    acceptance("C7 noise-free batch", report.score == 0.0 and elapsed < 60,
               f"score {report.score}, {elapsed:.1f}s")


@pytest.mark.slow
def test_c8_noisy_multi_gesture(make_batch, acceptance):
    m, root = make_batch(n_gestures=8, n_test=40, min_gestures=1, max_gestures=5,
                         noise_sigma=0.03, seed=8)
    cfg = Config()
    vocab = train_vocabulary(m, cfg)
    _, truth_seg = run_batch(m, vocab, cfg, load_spans(root / "segments.json"))
    _, auto_seg = run_batch(m, vocab, cfg)
    gap = abs(auto_seg.score - truth_seg.score)
    acceptance("C8 auto vs ground-truth segmentation",
               gap <= 0.10 and auto_seg.score <= 0.20 and truth_seg.score <= 0.20,
               f"ground truth {truth_seg.score:.4f}, auto {auto_seg.score:.4f}")


@pytest.mark.slow
def test_c9_static_classes_err_more(make_batch, acceptance):
    m, root = make_batch(n_gestures=10, n_static=3, n_test=60, max_gestures=1,
                         noise_sigma=0.03, seed=9)
    cfg = Config()
    vocab = train_vocabulary(m, cfg)
    preds, _ = run_batch(m, vocab, cfg, load_spans(root / "segments.json"))
    wrong, seen = collections.Counter(), collections.Counter()
    for p, t in zip(preds, m.test):
        for truth, got in zip(t.truth, p.labels):
            seen[truth] += 1
            wrong[truth] += truth != got
    rate = {k: wrong[k] / seen[k] for k in seen}
    static = range(m.n_gestures - 3 + 1, m.n_gestures + 1)
    static_rates = [rate[k] for k in static if k in rate]
    dynamic_rates = [rate[k] for k in rate if k not in static]
    ok = bool(static_rates) and bool(dynamic_rates) and min(static_rates) > max(dynamic_rates)
    acceptance("C9 static above dynamic error", ok,
               f"static min {min(static_rates):.2f}, dynamic max {max(dynamic_rates):.2f}")


@pytest.mark.slow
def test_c10_determinism(small_batch, tmp_path, acceptance):
    _, root = small_batch
    manifest = str(root / "manifest.json")
    outputs = collections.defaultdict(list)
    for run, jobs in enumerate(("1", "1", "8")):
        model = tmp_path / f"model{run}.json"
        preds = tmp_path / f"preds{run}.json"
        assert main(["train", manifest, "-o", str(model), "-j", jobs]) == 0
        assert main(["classify", "-m", str(model), "--manifest", manifest, "-o", str(preds),
                     "-j", jobs]) == 0
        outputs["train"].append(model.read_bytes())
        outputs["classify"].append(preds.read_bytes())
    same = all(len(set(v)) == 1 for v in outputs.values())
    n_preds = len(json.loads(outputs["classify"][0]))
    acceptance("C10 determinism", same, f"3 runs (jobs 1, 1, 8), {n_preds} predictions each")
