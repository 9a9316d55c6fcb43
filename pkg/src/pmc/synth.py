"""Synthetic gesture batches: a Gaussian blob tracing one path per gesture.

Training videos are clean renderings; test videos chain one to five
renderings separated by still frames and optionally add pixel noise.  The
generator writes PGM frame directories, a manifest, and the ground-truth
frame spans of every test gesture.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .frameio import BatchManifest, TestItem, frame_name, save_manifest, to_bytes, write_pgm


def _tri(x):
    """Triangle wave with period 1, range [0, 1]."""
    x = np.mod(x, 1.0)
    return 1.0 - np.abs(2.0 * x - 1.0)


def _square(s):
    corners = np.array([[0.25, 0.25], [0.75, 0.25], [0.75, 0.75], [0.25, 0.75], [0.25, 0.25]])
    t = np.clip(s, 0.0, 1.0) * 4.0
    k = np.minimum(t.astype(int), 3)
    f = (t - k)[:, None]
    return corners[k] * (1 - f) + corners[k + 1] * f


# paths map progress s in [0, 1] to (x, y) in unit frame coordinates
DYNAMIC_PATHS = {
    "horizontal": lambda s: np.stack([0.15 + 0.7 * s, np.full_like(s, 0.5)], 1),
    "vertical": lambda s: np.stack([np.full_like(s, 0.5), 0.15 + 0.7 * s], 1),
    "diagonal": lambda s: np.stack([0.15 + 0.7 * s, 0.15 + 0.7 * s], 1),
    "antidiagonal": lambda s: np.stack([0.85 - 0.7 * s, 0.15 + 0.7 * s], 1),
    "circle": lambda s: np.stack(
        [0.5 + 0.3 * np.cos(2 * np.pi * s), 0.5 + 0.3 * np.sin(2 * np.pi * s)], 1
    ),
    "zigzag": lambda s: np.stack([0.15 + 0.7 * s, 0.3 + 0.4 * _tri(2.5 * s)], 1),
    "upper-wave": lambda s: np.stack(
        [0.5 + 0.35 * np.sin(4 * np.pi * s), np.full_like(s, 0.18)], 1
    ),
    "right-bounce": lambda s: np.stack(
        [np.full_like(s, 0.82), 0.5 + 0.32 * np.sin(4 * np.pi * s)], 1
    ),
    "square": _square,
    "figure-eight": lambda s: np.stack(
        [0.5 + 0.3 * np.sin(2 * np.pi * s), 0.5 + 0.2 * np.sin(4 * np.pi * s)], 1
    ),
    "lower-circle": lambda s: np.stack(
        [0.3 + 0.12 * np.cos(2 * np.pi * s), 0.75 + 0.12 * np.sin(2 * np.pi * s)], 1
    ),
    "lower-sweep": lambda s: np.stack([0.85 - 0.7 * s, np.full_like(s, 0.85)], 1),
}

# the blob appears at a spot, holds still, and vanishes
STATIC_SPOTS = {
    "hold-center": (0.5, 0.5),
    "hold-upper-left": (0.3, 0.3),
    "hold-lower-right": (0.7, 0.7),
}


@dataclass(frozen=True)
class SynthSpec:
    n_gestures: int = 8
    frame_height: int = 120
    frame_width: int = 160
    frames_per_gesture: int = 24
    n_test: int = 47
    min_gestures: int = 1
    max_gestures: int = 5
    noise_sigma: float = 0.0
    seed: int = 0
    # how many of the n_gestures classes are static holds
    n_static: int = 0
    blob_sigma: float = 6.0
    amplitude: float = 1.0
    min_gap: int = 5
    max_gap: int = 15
    margin: int = 2
    # per-rendering variation of test gestures
    shift_jitter: float = 0.0
    tempo_jitter: float = 0.0

    def __post_init__(self):
        counts = (self.n_gestures, self.frame_height, self.frame_width,
                  self.frames_per_gesture, self.n_test)
        if min(counts) < 1:
            raise ValueError("all counts must be >= 1")
        if not 1 <= self.min_gestures <= self.max_gestures <= 5:
            raise ValueError("gestures per test video must satisfy 1 <= min <= max <= 5")
        if self.noise_sigma < 0 or self.shift_jitter < 0 or self.tempo_jitter < 0:
            raise ValueError("noise and jitter must be >= 0")
        if not 0 <= self.n_static <= min(self.n_gestures, len(STATIC_SPOTS)):
            raise ValueError(f"n_static must lie in [0, {len(STATIC_SPOTS)}] and not exceed n_gestures")
        if self.n_gestures - self.n_static > len(DYNAMIC_PATHS):
            raise ValueError(
                f"{self.n_gestures - self.n_static} dynamic classes requested, "
                f"only {len(DYNAMIC_PATHS)} trajectory families exist"
            )
        if not 2 * self.margin < self.min_gap <= self.max_gap:
            raise ValueError("need 2 * margin < min_gap <= max_gap")
        if not 0.0 < self.amplitude <= 1.0:
            raise ValueError("amplitude must lie in (0, 1]")

    @classmethod
    def from_json(cls, obj: dict) -> "SynthSpec":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ValueError(f"unknown synth spec keys: {sorted(unknown)}")
        return cls(**obj)

    def families(self) -> list[str]:
        n_dyn = self.n_gestures - self.n_static
        return list(DYNAMIC_PATHS)[:n_dyn] + list(STATIC_SPOTS)[: self.n_static]


def _ease(n: int) -> np.ndarray:
    t = np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)
    return 0.5 - 0.5 * np.cos(np.pi * t)


def blob_frames(centers: np.ndarray, height: int, width: int, sigma: float, amplitude: float) -> np.ndarray:
    """Render a Gaussian blob at each ``(x, y)`` pixel center; shape ``(n, h, w)``."""
    ys = np.arange(height)[None, :, None]
    xs = np.arange(width)[None, None, :]
    cx = centers[:, 0][:, None, None]
    cy = centers[:, 1][:, None, None]
    return amplitude * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2.0 * sigma ** 2))


def render_gesture(family: str, spec: SynthSpec, n_frames: int | None = None,
                   shift=(0.0, 0.0)) -> np.ndarray:
    """Core frames of one gesture (blob visible in every frame), unquantized."""
    n = spec.frames_per_gesture if n_frames is None else n_frames
    if family in DYNAMIC_PATHS:
        unit = DYNAMIC_PATHS[family](_ease(n))
    elif family in STATIC_SPOTS:
        unit = np.tile(np.array(STATIC_SPOTS[family]), (n, 1))
    else:
        raise ValueError(f"unknown gesture family {family!r}")
    centers = unit * np.array([spec.frame_width - 1, spec.frame_height - 1]) + np.asarray(shift)
    return blob_frames(centers, spec.frame_height, spec.frame_width, spec.blob_sigma, spec.amplitude)


def _blank(n: int, spec: SynthSpec) -> np.ndarray:
    return np.zeros((n, spec.frame_height, spec.frame_width))


def render_training_video(family: str, spec: SynthSpec) -> np.ndarray:
    pad = _blank(spec.margin, spec)
    return np.concatenate([pad, render_gesture(family, spec), pad])


def render_test_video(labels, spec: SynthSpec, rng: np.random.Generator):
    """Frames and ground-truth frame spans of one test video."""
    families = spec.families()
    pieces = [_blank(spec.margin, spec)]
    spans = []
    pos = spec.margin
    for k, label in enumerate(labels):
        if k:
            gap = int(rng.integers(spec.min_gap, spec.max_gap + 1))
            pieces.append(_blank(gap, spec))
            pos += gap
        n = spec.frames_per_gesture
        if spec.tempo_jitter:
            n = max(2, int(round(n * (1.0 + rng.uniform(-spec.tempo_jitter, spec.tempo_jitter)))))
        shift = (0.0, 0.0)
        if spec.shift_jitter:
            shift = tuple(rng.uniform(-spec.shift_jitter, spec.shift_jitter, 2))
        pieces.append(render_gesture(families[label - 1], spec, n, shift))
        spans.append((pos - spec.margin, pos + n + spec.margin))
        pos += n
    pieces.append(_blank(spec.margin, spec))
    frames = np.concatenate(pieces)
    if spec.noise_sigma > 0:
        frames = frames + rng.normal(0.0, spec.noise_sigma, frames.shape)
    return to_bytes(frames), spans


def _write_frames(path: Path, frames_u8: np.ndarray):
    path.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(frames_u8):
        write_pgm(path / frame_name(i), frame)


def generate_batch(spec: SynthSpec, out) -> BatchManifest:
    """Write a synthetic batch under ``out`` and return its manifest.

    Layout: ``train/gNN/``, ``test/tNNN/`` frame directories, ``manifest.json``,
    ``segments.json`` (ground-truth spans, one entry per test video) and
    ``synth_spec.json``.
    """
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)
    train = []
    for label, family in enumerate(spec.families(), start=1):
        rel = f"train/g{label:02d}"
        _write_frames(out / rel, to_bytes(render_training_video(family, spec)))
        train.append((rel, label))
    test, segments = [], []
    for i in range(spec.n_test):
        count = int(rng.integers(spec.min_gestures, spec.max_gestures + 1))
        labels = tuple(int(x) for x in rng.integers(1, spec.n_gestures + 1, count))
        rel = f"test/t{i + 1:03d}"
        frames, spans = render_test_video(labels, spec, rng)
        _write_frames(out / rel, frames)
        test.append(TestItem(rel, labels))
        segments.append({"video": rel, "spans": [list(s) for s in spans]})
    manifest = BatchManifest(spec.frame_width, spec.frame_height, tuple(train), tuple(test), out)
    save_manifest(out / "manifest.json", manifest)
    (out / "segments.json").write_text(json.dumps(segments, indent=1) + "\n")
    (out / "synth_spec.json").write_text(json.dumps(asdict(spec), indent=1) + "\n")
    return manifest
