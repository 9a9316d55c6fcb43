"""Motion maps: difference images, motion expansion and patch pooling.

A video of N frames becomes an ``(N-1, n_patches)`` matrix with one motion
map per row.  The first row is always zero (the first difference image is
defined as empty so the bag has one row per frame transition slot).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .frameio import Video


class DegenerateVideoWarning(UserWarning):
    pass


def difference_images(video: Video) -> np.ndarray:
    """Absolute differences of consecutive frames, shape ``(N-1, h, w)``.

    Slot 0 is all zeros; slot i >= 1 holds ``|I[i+1] - I[i]|``.  A
    single-frame video yields an empty ``(0, h, w)`` array.
    """
    frames = video.frames
    n, h, w = frames.shape
    out = np.zeros((max(n - 1, 0), h, w))
    if n > 2:
        out[1:] = np.abs(frames[2:] - frames[1:-1])
    return out


def expand_motion(diff: np.ndarray, tau: int) -> np.ndarray:
    """Add four copies of ``diff`` shifted by ``tau`` pixels (zero padded)."""
    diff = np.asarray(diff, dtype=np.float64)
    h, w = diff.shape[-2:]
    tau = int(tau)
    if tau < 0 or tau >= min(h, w):
        raise ValueError(f"tau={tau} must satisfy 0 <= tau < min(w, h) = {min(h, w)}")
    if tau == 0:
        return 5.0 * diff
    # taps added in the fixed order x+tau, x-tau, y+tau, y-tau
    out = diff.copy()
    out[..., :, :-tau] += diff[..., :, tau:]
    out[..., :, tau:] += diff[..., :, :-tau]
    out[..., :-tau, :] += diff[..., tau:, :]
    out[..., tau:, :] += diff[..., :-tau, :]
    return out


def _round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def grid_shape(height: int, width: int, gamma: float) -> tuple[int, int]:
    if not 0.0 < gamma <= 1.0:
        raise ValueError(f"gamma={gamma} must lie in (0, 1]")
    rows, cols = _round_half_up(height * gamma), _round_half_up(width * gamma)
    if rows < 1 or cols < 1:
        raise ValueError(f"gamma={gamma} shrinks a {width}x{height} frame to nothing")
    return rows, cols


def patch_edges(size: int, parts: int) -> np.ndarray:
    """Patch boundaries ``round(k * size / parts)`` for k = 0..parts."""
    if not 1 <= parts <= size:
        raise ValueError(f"cannot split {size} pixels into {parts} patches")
    # integer round-half-up of k * size / parts
    return np.array([(2 * k * size + parts) // (2 * parts) for k in range(parts + 1)])


def pool(diff: np.ndarray, grid: tuple[int, int]) -> np.ndarray:
    """Mean of ``|diff|`` over each patch of a ``rows x cols`` grid.

    Works on a single image ``(h, w)`` or a stack ``(n, h, w)``; the
    last two axes are flattened row-major into ``rows * cols`` values.
    """
    diff = np.abs(np.asarray(diff, dtype=np.float64))
    h, w = diff.shape[-2:]
    rows, cols = grid
    re, ce = patch_edges(h, rows), patch_edges(w, cols)
    sums = np.add.reduceat(np.add.reduceat(diff, re[:-1], axis=-2), ce[:-1], axis=-1)
    area = np.outer(np.diff(re), np.diff(ce))
    means = sums / area
    return means.reshape(diff.shape[:-2] + (rows * cols,))


def pool_to_grid(diff: np.ndarray, gamma: float) -> np.ndarray:
    """Pool to the grid obtained by scaling the frame size by ``gamma``."""
    h, w = np.shape(diff)[-2:]
    return pool(diff, grid_shape(h, w, gamma))


@dataclass(frozen=True)
class BagOfFrames:
    """Motion-map matrix of one video: one row per map, one column per patch."""

    matrix: np.ndarray
    grid: tuple[int, int]
    video_id: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[1] != self.grid[0] * self.grid[1]:
            raise ValueError(f"matrix shape {m.shape} does not fit grid {self.grid}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "grid", tuple(int(g) for g in self.grid))

    @property
    def n_rows(self) -> int:
        return self.matrix.shape[0]


def bag_of_frames(video: Video, tau: int = 5, gamma: float = 0.1) -> BagOfFrames:
    grid = grid_shape(video.height, video.width, gamma)
    if tau < 0 or tau >= min(video.height, video.width):
        raise ValueError(f"tau={tau} must satisfy 0 <= tau < min(w, h)")
    diffs = difference_images(video)
    if len(diffs) == 0:
        warnings.warn(f"video {video.id!r} has a single frame", DegenerateVideoWarning)
        return BagOfFrames(np.zeros((1, grid[0] * grid[1])), grid, video.id)
    return BagOfFrames(pool(expand_motion(diffs, tau), grid), grid, video.id)
