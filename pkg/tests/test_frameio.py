import json
import random

import numpy as np
import pytest

from pmc.frameio import (
    DimensionMismatchError,
    FrameFormatError,
    ManifestError,
    Video,
    frame_name,
    load_manifest,
    load_video,
    read_pgm,
    save_video,
    write_pgm,
)


def write_frames(path, images):
    path.mkdir(parents=True, exist_ok=True)
    for i, img in enumerate(images):
        write_pgm(path / frame_name(i), np.asarray(img, dtype=np.uint8))


def test_load_three_frames(tmp_path):
    write_frames(tmp_path, [np.zeros((240, 320))] * 3)
    v = load_video(tmp_path)
    assert (v.n_frames, v.width, v.height) == (3, 320, 240)


def test_byte_normalization_endpoints(tmp_path):
    img = np.array([[0, 255], [128, 1]], dtype=np.uint8)
    write_frames(tmp_path, [img])
    v = load_video(tmp_path)
    assert v.frames[0, 0, 0] == 0.0
    assert v.frames[0, 0, 1] == 1.0
    assert v.frames[0, 1, 0] == 128 / 255


def test_dimension_mismatch(tmp_path):
    write_frames(tmp_path, [np.zeros((240, 320)), np.zeros((100, 100)), np.zeros((240, 320))])
    with pytest.raises(DimensionMismatchError, match="frame_00002"):
        load_video(tmp_path)


def test_garbled_file_named(tmp_path):
    write_frames(tmp_path, [np.zeros((4, 4))] * 2)
    (tmp_path / frame_name(1)).write_bytes(b"P6\n4 4\n255\n" + bytes(48))
    with pytest.raises(FrameFormatError, match="frame_00002"):
        load_video(tmp_path)


def test_truncated_raster(tmp_path):
    (tmp_path / "frame_00001.pgm").write_bytes(b"P5\n4 4\n255\n" + bytes(10))
    with pytest.raises(FrameFormatError, match="16 pixel bytes"):
        load_video(tmp_path)


def test_missing_frame_in_sequence(tmp_path):
    write_frames(tmp_path, [np.zeros((4, 4))] * 3)
    (tmp_path / frame_name(1)).unlink()
    with pytest.raises(FrameFormatError, match="frame_00002"):
        load_video(tmp_path)


def test_header_comments_are_skipped(tmp_path):
    p = tmp_path / "x.pgm"
    p.write_bytes(b"P5\n# made by hand\n2 1\n255\n\x07\x09")
    assert read_pgm(p).tolist() == [[7, 9]]


def test_order_independent_of_creation_order(tmp_path, rng):
    images = rng.integers(0, 256, (6, 5, 7)).astype(np.uint8)
    order = list(range(6))
    random.Random(3).shuffle(order)
    tmp_path.mkdir(exist_ok=True)
    for i in order:
        write_pgm(tmp_path / frame_name(i), images[i])
    v = load_video(tmp_path)
    np.testing.assert_array_equal(v.frames, images / 255.0)


def test_round_trip_within_one_level(tmp_path, rng):
    frames = rng.random((4, 9, 11))
    save_video(tmp_path, Video(frames))
    back = load_video(tmp_path)
    assert np.max(np.abs(back.frames - frames)) <= 1 / 255


def test_video_rejects_out_of_range():
    with pytest.raises(ValueError):
        Video(np.full((1, 2, 2), 1.5))


def test_video_is_immutable():
    v = Video(np.zeros((2, 3, 3)))
    with pytest.raises(ValueError):
        v.frames[0, 0, 0] = 1.0


def _manifest(tmp_path, train, truths):
    obj = {
        "frame_width": 8,
        "frame_height": 6,
        "train": [{"path": f"g{label}", "label": label} for label in train],
        "test": [{"path": f"t{i}", "truth": t} for i, t in enumerate(truths)],
    }
    p = tmp_path / "manifest.json"
    p.write_text(json.dumps(obj))
    return p


def test_valid_manifest(tmp_path):
    m = load_manifest(_manifest(tmp_path, [1, 2, 3], [[2, 1]]))
    assert m.n_gestures == 3
    assert m.test[0].truth == (2, 1)
    assert m.resolve("g1") == tmp_path / "g1"


def test_manifest_label_gap(tmp_path):
    with pytest.raises(ManifestError) as info:
        load_manifest(_manifest(tmp_path, [1, 3], [[1]]))
    assert any("gap" in v and "2" in v for v in info.value.violations)


def test_manifest_truth_out_of_range(tmp_path):
    with pytest.raises(ManifestError, match="9"):
        load_manifest(_manifest(tmp_path, range(1, 9), [[9]]))


def test_manifest_lists_all_violations(tmp_path):
    with pytest.raises(ManifestError) as info:
        load_manifest(_manifest(tmp_path, [1, 1, 3], [[4], [1, 1, 1, 1, 1, 1]]))
    text = " ".join(info.value.violations)
    assert "duplicate" in text and "gap" in text and "outside 1..3" in text and "length 6" in text


def test_manifest_schema_error(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{"train": []}')
    with pytest.raises(ManifestError):
        load_manifest(p)
