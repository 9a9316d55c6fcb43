"""Frame sequences and batch manifests on disk.

A video is a directory of binary PGM files named ``frame_00001.pgm``,
``frame_00002.pgm``, ... (1-based on disk, 0-based in memory).  A batch
manifest is a JSON file listing one training video per gesture label and a
number of test videos with their truth label sequences.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

FRAME_PATTERN = re.compile(r"^frame_(\d{5})\.pgm$")
MODALITIES = ("rgb-gray", "depth")
MAX_TRUTH_LENGTH = 5


class FrameFormatError(ValueError):
    """A frame file is missing, unreadable or not a P5/255 PGM."""


class DimensionMismatchError(ValueError):
    """Frames of one video do not share the same size."""


class ManifestError(ValueError):
    """A batch manifest violates one or more of its invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid manifest: " + "; ".join(self.violations))


@dataclass(frozen=True)
class Video:
    """An ordered stack of grayscale frames, shape ``(N, h, w)`` in [0, 1]."""

    frames: np.ndarray
    modality: str = "rgb-gray"
    id: str = ""

    def __post_init__(self):
        frames = np.asarray(self.frames, dtype=np.float64)
        if frames.ndim != 3:
            raise DimensionMismatchError(f"expected (N, h, w) frames, got shape {frames.shape}")
        n, h, w = frames.shape
        if n < 1 or h < 1 or w < 1:
            raise DimensionMismatchError(f"empty video or frame: shape {frames.shape}")
        if frames.min() < 0.0 or frames.max() > 1.0:
            raise ValueError("frame intensities must lie in [0, 1]")
        if self.modality not in MODALITIES:
            raise ValueError(f"unknown modality {self.modality!r}")
        frames.setflags(write=False)
        object.__setattr__(self, "frames", frames)

    @property
    def n_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def height(self) -> int:
        return self.frames.shape[1]

    @property
    def width(self) -> int:
        return self.frames.shape[2]

    def clip(self, start: int, stop: int) -> "Video":
        """Frames ``[start, stop)`` as a new video."""
        return Video(self.frames[start:stop], self.modality, f"{self.id}[{start}:{stop}]")


def _next_token(data: bytes, pos: int) -> tuple[bytes, int]:
    n = len(data)
    while pos < n:
        ch = data[pos:pos + 1]
        if ch == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    return data[start:pos], pos


def read_pgm(path) -> np.ndarray:
    """Read a binary 8-bit PGM into a ``uint8`` array of shape ``(h, w)``."""
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as exc:
        raise FrameFormatError(f"{path}: cannot read ({exc.strerror})") from exc
    magic, pos = _next_token(data, 0)
    if magic != b"P5":
        raise FrameFormatError(f"{path}: not a binary PGM (magic {magic!r})")
    fields = []
    for _ in range(3):
        tok, pos = _next_token(data, pos)
        if not tok.isdigit():
            raise FrameFormatError(f"{path}: malformed header")
        fields.append(int(tok))
    width, height, maxval = fields
    if maxval != 255:
        raise FrameFormatError(f"{path}: maxval {maxval} unsupported, expected 255")
    if width < 1 or height < 1:
        raise FrameFormatError(f"{path}: empty image")
    # exactly one whitespace byte separates the header from the raster
    pixels = data[pos + 1:]
    if len(pixels) != width * height:
        raise FrameFormatError(
            f"{path}: expected {width * height} pixel bytes, found {len(pixels)}"
        )
    return np.frombuffer(pixels, dtype=np.uint8).reshape(height, width)


def write_pgm(path, image: np.ndarray) -> None:
    """Write a ``uint8`` array (or floats in [0, 1]) as a binary PGM."""
    image = np.asarray(image)
    if image.dtype != np.uint8:
        image = to_bytes(image)
    h, w = image.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + image.tobytes())


def to_bytes(intensities: np.ndarray) -> np.ndarray:
    return np.floor(np.clip(intensities, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def frame_name(index: int) -> str:
    """File name of the 0-based frame ``index``."""
    return f"frame_{index + 1:05d}.pgm"


def load_video(path, modality: str = "rgb-gray", video_id: str | None = None) -> Video:
    path = Path(path)
    if not path.is_dir():
        raise FrameFormatError(f"{path}: not a directory")
    indexed = {}
    for entry in path.iterdir():
        m = FRAME_PATTERN.match(entry.name)
        if m:
            indexed[int(m.group(1))] = entry
    if not indexed:
        raise FrameFormatError(f"{path}: no frame_NNNNN.pgm files")
    n = max(indexed)
    missing = [i for i in range(1, n + 1) if i not in indexed]
    if missing:
        raise FrameFormatError(f"{path / frame_name(missing[0] - 1)}: missing frame")

    images = []
    for i in range(1, n + 1):
        img = read_pgm(indexed[i])
        if images and img.shape != images[0].shape:
            raise DimensionMismatchError(
                f"{indexed[i]}: size {img.shape[1]}x{img.shape[0]} differs from "
                f"{images[0].shape[1]}x{images[0].shape[0]} of the first frame"
            )
        images.append(img)
    frames = np.stack(images).astype(np.float64) / 255.0
    return Video(frames, modality, str(path) if video_id is None else video_id)


def save_video(path, video: Video) -> None:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    for i, frame in enumerate(video.frames):
        write_pgm(path / frame_name(i), frame)


@dataclass(frozen=True)
class TestItem:
    __test__ = False  # not a pytest class

    path: str
    truth: tuple[int, ...]


@dataclass(frozen=True)
class BatchManifest:
    frame_width: int
    frame_height: int
    train: tuple[tuple[str, int], ...]
    test: tuple[TestItem, ...]
    root: Path = field(default=Path("."), compare=False)

    @property
    def n_gestures(self) -> int:
        return len(self.train)

    def resolve(self, rel: str) -> Path:
        p = Path(rel)
        return p if p.is_absolute() else self.root / p

    def to_json(self) -> dict:
        return {
            "frame_width": self.frame_width,
            "frame_height": self.frame_height,
            "train": [{"path": p, "label": label} for p, label in self.train],
            "test": [{"path": t.path, "truth": list(t.truth)} for t in self.test],
        }


def validate_manifest(m: BatchManifest) -> list[str]:
    """All invariant violations of ``m`` (empty when valid)."""
    problems = []
    if m.frame_width < 1 or m.frame_height < 1:
        problems.append(f"frame dims must be positive, got {m.frame_width}x{m.frame_height}")
    labels = [label for _, label in m.train]
    seen = set()
    for label in labels:
        if label in seen:
            problems.append(f"duplicate training label {label}")
        seen.add(label)
    k = len(seen)
    if not labels:
        problems.append("no training videos")
    else:
        for label in sorted(seen):
            if label < 1:
                problems.append(f"training label {label} is not positive")
        for gap in range(1, max(max(seen), 1) + 1):
            if gap not in seen:
                problems.append(f"label gap: no training video for label {gap}")
        k = max(seen)
    for item in m.test:
        if not 1 <= len(item.truth) <= MAX_TRUTH_LENGTH:
            problems.append(
                f"test {item.path}: truth length {len(item.truth)} outside [1, {MAX_TRUTH_LENGTH}]"
            )
        for label in item.truth:
            if not 1 <= label <= k:
                problems.append(f"test {item.path}: truth label {label} outside 1..{k}")
    return problems


def parse_manifest(obj: dict, root=".") -> BatchManifest:
    try:
        m = BatchManifest(
            frame_width=int(obj["frame_width"]),
            frame_height=int(obj["frame_height"]),
            train=tuple((str(e["path"]), int(e["label"])) for e in obj["train"]),
            test=tuple(
                TestItem(str(e["path"]), tuple(int(x) for x in e["truth"]))
                for e in obj.get("test", [])
            ),
            root=Path(root),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ManifestError([f"schema error: {exc!r}"]) from exc
    problems = validate_manifest(m)
    if problems:
        raise ManifestError(problems)
    return m


def load_manifest(path) -> BatchManifest:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError([f"{path}: {exc}"]) from exc
    return parse_manifest(obj, root=path.parent)


def save_manifest(path, manifest: BatchManifest) -> None:
    Path(path).write_text(json.dumps(manifest.to_json(), indent=1) + "\n")
