"""Helpers shared by the experiment scripts."""
import tempfile
import time

from pmc.evaluate import batch_score
from pmc.model import train_vocabulary
from pmc.pipeline import load_spans, predict_videos
from pmc.synth import generate_batch


def make(spec):
    root = tempfile.mkdtemp(prefix="pmc_")
    return generate_batch(spec, root), root


def evaluate(manifest, root, cfg, segmentation="both"):
    """Train on ``manifest`` and score its test videos.

    Returns a dict with the ground-truth and/or automatic segmentation
    scores and the wall time of each run.
    """
    vocab = train_vocabulary(manifest, cfg)
    items = [(t.path, manifest.resolve(t.path)) for t in manifest.test]
    out = {}
    modes = {"truth": load_spans(f"{root}/segments.json"), "auto": None}
    for name, spans in modes.items():
        if segmentation not in ("both", name):
            continue
        t0 = time.perf_counter()
        preds = predict_videos(items, vocab, cfg, spans)
        failed = [p for p in preds if p.error]
        if failed:
            raise RuntimeError(f"{failed[0].video}: {failed[0].error}")
        report = batch_score(manifest, {p.video: list(p.labels) for p in preds})
        out[name] = report.score
        out[name + "_time"] = time.perf_counter() - t0
    return out
