"""Per-gesture PCA models and minimum-reconstruction-error classification.

Each gesture gets a PCA model fitted to the rows of its single training bag.
A test bag is projected onto every model, mapped back, and assigned the
label whose model reconstructs it with the smallest mean row error.
"""
from __future__ import annotations

import json
import logging
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import Config
from .frameio import BatchManifest, load_video
from .motion import BagOfFrames, bag_of_frames
from .segment import coarse_sequence

log = logging.getLogger(__name__)

# singular values at or below SV_RTOL * s_max are treated as zero
SV_RTOL = 1e-10
# a centered matrix whose s_max is at or below ZERO_RTOL * ||H||_F is all zero
ZERO_RTOL = 1e-12


class DegenerateModelWarning(UserWarning):
    """The training bag has no variance; the model is its mean only."""


class DegenerateModelError(ValueError):
    pass


class TrainingError(RuntimeError):
    def __init__(self, label: int, cause: Exception):
        self.label = label
        super().__init__(f"gesture {label}: {cause}")


@dataclass(frozen=True)
class PcaModel:
    mean: np.ndarray
    singular_values: np.ndarray
    components: np.ndarray  # (n_patches, c) with orthonormal columns
    grid: tuple[int, int]

    def __post_init__(self):
        for name in ("mean", "singular_values", "components"):
            a = np.array(getattr(self, name), dtype=np.float64)
            a.setflags(write=False)
            object.__setattr__(self, name, a)
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))
        nb = self.grid[0] * self.grid[1]
        if self.components.size == 0:
            object.__setattr__(self, "components", np.zeros((nb, 0)))
        if self.mean.shape != (nb,) or self.components.shape != (nb, len(self.singular_values)):
            raise ValueError("inconsistent PCA model shapes")

    @property
    def n_components(self) -> int:
        """Number of components actually kept (may be below the request)."""
        return len(self.singular_values)


def _fix_signs(v: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if v.size == 0:
        return v
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[idx, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return v * signs


def fit_pca(bag: BagOfFrames, c: int) -> PcaModel:
    """Fit the mean and the top ``c`` right singular vectors of a bag."""
    if c < 1:
        raise ValueError("c must be >= 1")
    h = bag.matrix
    if h.shape[0] == 0:
        raise ValueError("cannot fit an empty bag")
    mean = h.mean(axis=0)
    centered = h - mean
    _, s, vt = np.linalg.svd(centered, full_matrices=False)
    scale = np.linalg.norm(h)
    if s.size == 0 or s[0] == 0.0 or s[0] <= ZERO_RTOL * scale:
        warnings.warn(
            f"bag {bag.video_id!r} has no variance; model reduces to its mean",
            DegenerateModelWarning,
        )
        return PcaModel(mean, np.zeros(0), np.zeros((h.shape[1], 0)), bag.grid)
    rank = int(np.sum(s > SV_RTOL * s[0]))
    keep = min(c, rank)
    if keep < c:
        log.warning("bag %r: requested %d components, rank is %d", bag.video_id, c, rank)
    return PcaModel(mean, s[:keep], _fix_signs(vt[:keep].T), bag.grid)


def _check(bag: BagOfFrames, model: PcaModel):
    if bag.grid != model.grid:
        raise ValueError(f"bag grid {bag.grid} does not match model grid {model.grid}")


def project(bag: BagOfFrames, model: PcaModel) -> np.ndarray:
    """Whitened coordinates ``(H - mean) V diag(s^-1/2)``, shape ``(q, c)``."""
    _check(bag, model)
    if model.n_components == 0:
        raise DegenerateModelError("model has no components")
    return (bag.matrix - model.mean) @ model.components / np.sqrt(model.singular_values)


def reconstruct(proj: np.ndarray, model: PcaModel) -> np.ndarray:
    """Map whitened coordinates back: ``P diag(s^+1/2) V^T + mean``."""
    if model.n_components == 0:
        raise DegenerateModelError("model has no components")
    return (proj * np.sqrt(model.singular_values)) @ model.components.T + model.mean


def reconstruction(bag: BagOfFrames, model: PcaModel) -> np.ndarray:
    if model.n_components == 0:
        _check(bag, model)
        return np.broadcast_to(model.mean, bag.matrix.shape)
    return reconstruct(project(bag, model), model)


def reconstruction_error(bag: BagOfFrames, model: PcaModel) -> float:
    """Mean over rows of the Euclidean distance between a bag and its reconstruction."""
    resid = reconstruction(bag, model) - bag.matrix
    return float(np.mean(np.sqrt(np.sum(resid * resid, axis=1))))


@dataclass(frozen=True)
class Vocabulary:
    models: tuple[PcaModel, ...]
    params: Config = field(default_factory=Config)
    # coarse time-ordered training sequences, used by the segmenter
    coarse: tuple[np.ndarray, ...] = ()

    def __post_init__(self):
        if len({m.grid for m in self.models}) > 1:
            raise ValueError("all models must share one grid")

    @property
    def labels(self) -> list[int]:
        return list(range(1, len(self.models) + 1))

    def to_json(self) -> dict:
        p = self.params
        return {
            "params": {
                "tau": p.tau,
                "gamma": p.gamma,
                "components": p.components,
                "coarse_grid": list(p.coarse_grid),
                "modality": p.modality,
            },
            "models": [
                {
                    "label": label,
                    "grid": list(m.grid),
                    "mean": m.mean.tolist(),
                    "singular_values": m.singular_values.tolist(),
                    "components": m.components.T.tolist(),
                    **({"coarse": self.coarse[label - 1].tolist()} if self.coarse else {}),
                }
                for label, m in zip(self.labels, self.models)
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json()) + "\n"

    @classmethod
    def from_json(cls, obj: dict, params: Config | None = None) -> "Vocabulary":
        raw = obj["params"]
        base = params or Config()
        params = base.override(
            tau=raw["tau"],
            gamma=raw["gamma"],
            components=raw["components"],
            coarse_grid=tuple(raw.get("coarse_grid", base.coarse_grid)),
            modality=raw.get("modality"),
        )
        entries = sorted(obj["models"], key=lambda e: e["label"])
        if [e["label"] for e in entries] != list(range(1, len(entries) + 1)):
            raise ValueError("model labels must be 1..K without gaps")
        models, coarse = [], []
        for e in entries:
            grid = tuple(e["grid"])
            nb = grid[0] * grid[1]
            comps = np.array(e["components"], dtype=np.float64).reshape(-1, nb).T
            models.append(PcaModel(np.array(e["mean"]), np.array(e["singular_values"]), comps, grid))
            if "coarse" in e:
                coarse.append(np.array(e["coarse"], dtype=np.float64).reshape(-1, params.coarse_grid[0] * params.coarse_grid[1]))
        if coarse and len(coarse) != len(models):
            raise ValueError("coarse sequences present for only some models")
        return cls(tuple(models), params, tuple(coarse))

    @classmethod
    def load(cls, path, params: Config | None = None) -> "Vocabulary":
        with open(path) as fh:
            return cls.from_json(json.load(fh), params)

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())


def _train_one(args):
    path, label, params = args
    try:
        video = load_video(path, params.modality)
        model = fit_pca(bag_of_frames(video, params.tau, params.gamma), params.components)
        coarse = coarse_sequence(video, params.coarse_grid)
    except (OSError, ValueError) as exc:
        raise TrainingError(label, exc) from exc
    return model, coarse


def train_vocabulary(manifest: BatchManifest, params: Config | None = None) -> Vocabulary:
    """One PCA model per training video, in label order."""
    params = params or Config()
    ordered = sorted(manifest.train, key=lambda t: t[1])
    tasks = [(manifest.resolve(p), label, params) for p, label in ordered]
    if params.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(params.jobs) as pool:
            results = list(pool.map(_train_one, tasks))
    else:
        results = [_train_one(t) for t in tasks]
    return Vocabulary(tuple(r[0] for r in results), params, tuple(r[1] for r in results))


def classify(bag: BagOfFrames, vocab: Vocabulary) -> tuple[int, np.ndarray]:
    """Label with the smallest reconstruction error (lowest label on ties)."""
    if not vocab.models:
        raise ValueError("empty vocabulary")
    errors = np.array([reconstruction_error(bag, m) for m in vocab.models])
    return int(np.argmin(errors)) + 1, errors
