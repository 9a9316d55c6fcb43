"""Temporal segmentation of multi-gesture videos with dynamic time warping.

Videos are reduced to time-ordered motion maps on a very coarse grid
(no motion expansion).  Starting at the left edge, every training sequence
is aligned against the test sequence with an open end; the alignment with
the lowest per-step cost fixes the next cut.  Spans that carry almost no
motion are dropped as inter-gesture rest.
"""
from __future__ import annotations

import numpy as np

from .frameio import Video
from .motion import difference_images, pool

NOISE_FLOOR_PERCENTILE = 5.0


def coarse_sequence(video: Video, grid: tuple[int, int] = (3, 3)) -> np.ndarray:
    """Time-ordered coarse motion maps, shape ``(N-1, rows * cols)``."""
    rows, cols = grid
    if rows < 1 or cols < 1 or rows > video.height or cols > video.width:
        raise ValueError(f"coarse grid {grid} does not fit a {video.width}x{video.height} frame")
    diffs = difference_images(video)
    if len(diffs) == 0:
        return np.zeros((0, rows * cols))
    return pool(diffs, grid)


def _local_costs(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64).reshape(len(a), -1)
    b = np.asarray(b, dtype=np.float64).reshape(len(b), -1)
    return np.sqrt(((a[:, None, :] - b[None, :, :]) ** 2).sum(axis=-1))


def _accumulate(d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cumulative cost and path length tables for local costs ``d``.

    Steps (1,0), (0,1), (1,1); among equal-cost predecessors the shorter
    path wins, so every cell holds the lexicographic minimum of
    (cost, length) over all monotone paths from (0, 0).
    """
    n, m = d.shape
    cost = np.empty((n, m))
    length = np.empty((n, m), dtype=np.int64)
    dl = d.tolist()
    cl = [[0.0] * m for _ in range(n)]
    ll = [[0] * m for _ in range(n)]
    for i in range(n):
        row, lrow, drow = cl[i], ll[i], dl[i]
        up = cl[i - 1] if i else None
        lup = ll[i - 1] if i else None
        for j in range(m):
            if i == 0 and j == 0:
                best = (0.0, 0)
            else:
                best = None
                if i and j:
                    best = (up[j - 1], lup[j - 1])
                if i:
                    cand = (up[j], lup[j])
                    if best is None or cand < best:
                        best = cand
                if j:
                    cand = (row[j - 1], lrow[j - 1])
                    if best is None or cand < best:
                        best = cand
            row[j] = best[0] + drow[j]
            lrow[j] = best[1] + 1
    cost[:] = cl
    length[:] = ll
    return cost, length


def dtw_distance(a: np.ndarray, b: np.ndarray) -> float:
    """DTW cost between two map sequences divided by the warping path length."""
    if len(a) == 0 or len(b) == 0:
        raise ValueError("DTW needs two nonempty sequences")
    cost, length = _accumulate(_local_costs(a, b))
    return float(cost[-1, -1] / length[-1, -1])


def open_end_costs(reference: np.ndarray, query: np.ndarray) -> np.ndarray:
    """Normalized cost of aligning all of ``reference`` with each prefix of ``query``.

    Entry ``j`` is the DTW distance between ``reference`` and ``query[:j+1]``.
    """
    cost, length = _accumulate(_local_costs(reference, query))
    return cost[-1] / length[-1]


def step_energy(seq: np.ndarray) -> np.ndarray:
    """Motion energy per step above the sequence's noise floor."""
    energy = np.asarray(seq).sum(axis=1)
    if len(energy) < 2:
        return np.zeros_like(energy)
    floor = np.percentile(energy[1:], NOISE_FLOOR_PERCENTILE)
    return np.maximum(energy - floor, 0.0)


def segment_steps(
    seq: np.ndarray,
    references: list[np.ndarray],
    min_span: int = 8,
    max_span: int = 60,
    max_warp: float = 1.5,
) -> list[tuple[int, int]]:
    """Greedy left-to-right cut of ``seq`` into spans of map steps.

    A reference of length n may only explain spans of length within
    ``[n / max_warp, n * max_warp]`` (intersected with the span limits).
    """
    if not references:
        raise ValueError("segmentation needs at least one training sequence")
    m = len(seq)
    spans: list[tuple[int, int]] = []
    p = 0
    while p < m:
        if m - p < min_span:
            if spans:
                spans[-1] = (spans[-1][0], m)
            else:
                spans.append((p, m))
            break
        window = seq[p:p + max_span]
        best = None  # (normalized cost, -end, g)
        for g, ref in enumerate(references):
            lo = max(min_span, int(np.ceil(len(ref) / max_warp)))
            hi = min(len(window), int(np.floor(len(ref) * max_warp)))
            if lo > hi:
                continue
            costs = open_end_costs(ref, window[:hi])
            for j in range(lo - 1, hi):
                key = (costs[j], -(p + j + 1), g)
                if best is None or key < best:
                    best = key
        if best is None:
            # tail too short for every reference
            if spans:
                spans[-1] = (spans[-1][0], m)
            else:
                spans.append((p, m))
            break
        end = -best[1]
        spans.append((p, end))
        p = end
    return spans


def segment_video(
    video: Video,
    references: list[np.ndarray],
    grid: tuple[int, int] = (3, 3),
    min_span: int = 8,
    max_span: int = 60,
    quiescence: float = 0.15,
    max_warp: float = 1.5,
) -> list[tuple[int, int]]:
    """Split a video into half-open frame spans, one per detected gesture.

    ``references`` are the coarse sequences of the training videos.  Spans
    whose mean motion energy is at most ``quiescence`` times the video's
    median step energy are dropped; an all-static video gives no spans.
    """
    n = video.n_frames
    seq = coarse_sequence(video, grid)
    if n < min_span + 1:
        return [(0, n)]
    step_spans = segment_steps(seq, references, min_span, max_span, max_warp)
    energy = step_energy(seq)
    reference_level = quiescence * float(np.median(energy))
    out = []
    for a, b in step_spans:
        if energy[a:b].mean() <= reference_level:
            continue
        out.append((a, n if b == len(seq) else b))
    return out
