"""Levenshtein scoring of predicted label sequences."""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .frameio import BatchManifest


class ScoringError(ValueError):
    pass


def levenshtein(a: Sequence[int], b: Sequence[int]) -> int:
    """Minimum number of unit-cost insertions, deletions and substitutions."""
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class VideoScore:
    video: str
    truth: tuple[int, ...]
    predicted: tuple[int, ...]
    edits: int

    @property
    def normalized(self) -> float:
        return self.edits / len(self.truth)


@dataclass(frozen=True)
class ScoreReport:
    per_video: tuple[VideoScore, ...]
    total_edits: int
    total_truth_labels: int
    wall_time: float = 0.0

    @property
    def score(self) -> float:
        """Total edits over total truth labels (lower is better)."""
        return self.total_edits / self.total_truth_labels if self.total_truth_labels else 0.0

    @property
    def mean_per_video(self) -> float:
        if not self.per_video:
            return 0.0
        return sum(v.normalized for v in self.per_video) / len(self.per_video)

    def to_json(self) -> dict:
        return {
            "score": self.score,
            "mean_per_video": self.mean_per_video,
            "total_edits": self.total_edits,
            "total_truth_labels": self.total_truth_labels,
            "wall_time": self.wall_time,
            "per_video": [
                {
                    "video": v.video,
                    "truth": list(v.truth),
                    "predicted": list(v.predicted),
                    "edits": v.edits,
                    "normalized": v.normalized,
                }
                for v in self.per_video
            ],
        }

    def tsv_line(self, name: str = "") -> str:
        return "\t".join(
            [name, f"{self.score:.6f}", f"{self.mean_per_video:.6f}",
             str(self.total_edits), str(self.total_truth_labels),
             str(len(self.per_video)), f"{self.wall_time:.3f}"]
        )

    TSV_HEADER = "batch\tscore\tmean_per_video\tedits\ttruth_labels\tvideos\twall_time"


def batch_score(
    manifest: BatchManifest,
    predictions: Mapping[str, Sequence[int]],
    wall_time: float = 0.0,
) -> ScoreReport:
    """Score every test video of ``manifest``; ``predictions`` is keyed by test path."""
    missing = [t.path for t in manifest.test if t.path not in predictions]
    if missing:
        raise ScoringError(f"no prediction for video(s): {', '.join(missing)}")
    rows = tuple(
        VideoScore(t.path, t.truth, tuple(predictions[t.path]),
                   levenshtein(predictions[t.path], t.truth))
        for t in manifest.test
    )
    return ScoreReport(
        rows,
        sum(r.edits for r in rows),
        sum(len(r.truth) for r in rows),
        wall_time,
    )


def load_predictions(path) -> dict[str, list[int]]:
    """Read ``[{"video": id, "labels": [...]}, ...]`` (or ``{"predictions": [...]}``)."""
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict):
        obj = obj["predictions"]
    return {str(e["video"]): [int(x) for x in e["labels"]] for e in obj}
