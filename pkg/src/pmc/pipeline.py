"""Recognition of whole test videos: segment, then classify each span."""
from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .config import Config
from .frameio import Video, load_video
from .model import Vocabulary, classify
from .motion import bag_of_frames
from .segment import segment_video


@dataclass(frozen=True)
class Prediction:
    video: str
    labels: tuple[int, ...]
    spans: tuple[tuple[int, int], ...]
    error: str | None = None

    def to_json(self) -> dict:
        d = {"video": self.video, "labels": list(self.labels),
             "spans": [list(s) for s in self.spans]}
        if self.error is not None:
            d["error"] = self.error
        return d


def recognize(video: Video, vocab: Vocabulary, cfg: Config,
              spans: Sequence[tuple[int, int]] | None = None) -> tuple[list[int], list[tuple[int, int]]]:
    """Label sequence of ``video``; segments automatically when ``spans`` is None."""
    if spans is None:
        if not vocab.coarse:
            raise ValueError("vocabulary carries no coarse sequences; automatic segmentation unavailable")
        spans = segment_video(video, list(vocab.coarse), cfg.coarse_grid,
                              cfg.min_span, cfg.max_span, cfg.quiescence, cfg.max_warp)
    labels = []
    for start, stop in spans:
        bag = bag_of_frames(video.clip(start, stop), cfg.tau, cfg.gamma)
        labels.append(classify(bag, vocab)[0])
    return labels, [tuple(s) for s in spans]


def _predict_one(task) -> Prediction:
    vid, path, vocab, cfg, spans = task
    try:
        video = load_video(path, cfg.modality, vid)
        labels, used = recognize(video, vocab, cfg, spans)
    except (OSError, ValueError) as exc:
        return Prediction(vid, (), (), f"{type(exc).__name__}: {exc}")
    return Prediction(vid, tuple(labels), tuple(used))


def predict_videos(items: Sequence[tuple[str, Path]], vocab: Vocabulary, cfg: Config,
                   manual_spans: dict[str, list] | None = None) -> list[Prediction]:
    """Predict every ``(video id, frame directory)`` in input order.

    With ``manual_spans`` each video is cut at the given spans instead of
    being segmented automatically; a video missing from it is an error.
    """
    results: list[Prediction | None] = [None] * len(items)
    tasks, slots = [], []
    for i, (vid, path) in enumerate(items):
        spans = None
        if manual_spans is not None:
            spans = manual_spans.get(vid)
            if spans is None:
                results[i] = Prediction(vid, (), (), "no manual spans for this video")
                continue
        tasks.append((vid, path, vocab, cfg, spans))
        slots.append(i)
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(cfg.jobs) as pool:
            done = list(pool.map(_predict_one, tasks))
    else:
        done = [_predict_one(t) for t in tasks]
    for i, p in zip(slots, done):
        results[i] = p
    return results


def load_spans(path) -> dict[str, list[tuple[int, int]]]:
    """Read segment-style JSON: one ``{"video", "spans"}`` object or a list of them."""
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict):
        obj = [obj]
    return {str(e["video"]): [tuple(int(x) for x in s) for s in e["spans"]] for e in obj}
