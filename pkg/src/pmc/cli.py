"""Command line front end: ``pmc {synth,train,classify,segment,score,dump}``.

Exit status is 0 on success, 1 on runtime failures and 2 on usage or
validation errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path

from .config import load_config
from .evaluate import ScoreReport, ScoringError, batch_score, load_predictions
from .frameio import DimensionMismatchError, FrameFormatError, ManifestError, load_manifest, load_video
from .model import TrainingError, Vocabulary, train_vocabulary
from .motion import bag_of_frames
from .pipeline import load_spans, predict_videos
from .segment import coarse_sequence, segment_video
from .synth import SynthSpec, generate_batch

log = logging.getLogger("pmc")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _config(args):
    try:
        return load_config(
            args.config,
            tau=getattr(args, "tau", None),
            gamma=getattr(args, "gamma", None),
            components=getattr(args, "components", None),
            jobs=getattr(args, "jobs", None),
            modality=getattr(args, "modality", None),
        )
    except (OSError, ValueError, TypeError) as exc:
        raise UsageError(f"bad configuration: {exc}") from exc


def _write(text: str, out):
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _dumps_records(records) -> str:
    """A JSON list with one compact record per line."""
    if not records:
        return "[]\n"
    return "[\n" + ",\n".join(json.dumps(r) for r in records) + "\n]\n"


def _video_items(args):
    """(id, path) pairs from ``--manifest`` test entries or positional dirs."""
    if args.manifest:
        m = load_manifest(args.manifest)
        return [(t.path, m.resolve(t.path)) for t in m.test]
    return [(v, Path(v)) for v in args.videos]


def cmd_synth(args) -> int:
    obj = {}
    if args.spec:
        obj = json.loads(Path(args.spec).read_text())
    if args.seed is not None:
        obj["seed"] = args.seed
    try:
        spec = SynthSpec.from_json(obj)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad synth spec: {exc}") from exc
    m = generate_batch(spec, args.out)
    log.info("wrote %d training and %d test videos to %s", len(m.train), len(m.test), args.out)
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _config(args)
    manifest = load_manifest(args.manifest)
    vocab = train_vocabulary(manifest, cfg)
    _write(vocab.dumps(), args.model_out)
    return EXIT_OK


def _load_vocab(args, cfg):
    try:
        return Vocabulary.load(args.model, cfg)
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise UsageError(f"{args.model}: not a model file ({exc})") from exc


def cmd_classify(args) -> int:
    cfg = _config(args)
    vocab = _load_vocab(args, cfg)
    cfg = vocab.params
    manual = None
    if args.segmentation != "auto":
        if not args.segmentation.startswith("manual:"):
            raise UsageError("--segmentation must be 'auto' or 'manual:<spans.json>'")
        manual = load_spans(args.segmentation[len("manual:"):])
    preds = predict_videos(_video_items(args), vocab, cfg, manual)
    failed = [p for p in preds if p.error is not None]
    for p in failed:
        log.error("%s: %s", p.video, p.error)
    _write(_dumps_records([p.to_json() for p in preds]), args.out)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_segment(args) -> int:
    cfg = _config(args)
    vocab = _load_vocab(args, cfg)
    cfg = vocab.params
    if not vocab.coarse:
        raise UsageError(f"{args.model} carries no coarse training sequences")
    results = []
    for vid, path in _video_items(args):
        video = load_video(path, cfg.modality, vid)
        spans = segment_video(video, list(vocab.coarse), cfg.coarse_grid, cfg.min_span,
                              cfg.max_span, cfg.quiescence, cfg.max_warp)
        results.append({"video": vid, "spans": [list(s) for s in spans]})
    single = not args.manifest and len(results) == 1
    _write(json.dumps(results[0]) + "\n" if single else _dumps_records(results), args.out)
    return EXIT_OK


def cmd_score(args) -> int:
    manifest = load_manifest(args.manifest)
    t0 = time.perf_counter()
    report = batch_score(manifest, load_predictions(args.predictions))
    report = ScoreReport(report.per_video, report.total_edits, report.total_truth_labels,
                         time.perf_counter() - t0)
    _write(_dumps(report.to_json()), args.out)
    if args.tsv:
        line = report.tsv_line(args.name or str(args.manifest)) + "\n"
        with open(args.tsv, "a") as fh:
            fh.write(line)
    if args.out is not None and str(args.out) != "-":
        print(f"score {report.score:.6f} ({report.total_edits}/{report.total_truth_labels})")
    return EXIT_OK


def _csv_rows(rows) -> str:
    from io import StringIO

    buf = StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([repr(float(x)) for x in row])
    return buf.getvalue()


def cmd_dump(args) -> int:
    cfg = _config(args)
    if args.what in ("motion-maps", "coarse"):
        if not args.video:
            raise UsageError(f"dump {args.what} needs --video")
        video = load_video(args.video, cfg.modality)
        if args.what == "motion-maps":
            matrix = bag_of_frames(video, cfg.tau, cfg.gamma).matrix
        else:
            matrix = coarse_sequence(video, cfg.coarse_grid)
        _write(_csv_rows(matrix), args.out)
        return EXIT_OK
    if not args.model or args.label is None:
        raise UsageError("dump components needs --model and --label")
    vocab = _load_vocab(args, cfg)
    if not 1 <= args.label <= len(vocab.models):
        raise UsageError(f"label {args.label} outside 1..{len(vocab.models)}")
    model = vocab.models[args.label - 1]
    rows, cols = model.grid
    lines = []
    for k in range(min(args.top, model.n_components)):
        lines.append(f"# component {k + 1} singular_value {float(model.singular_values[k])!r}\n")
        lines.append(_csv_rows(model.components[:, k].reshape(rows, cols)))
    _write("".join(lines), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pmc", description="One-shot gesture recognition with principal motion components.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def params(sp, jobs=True):
        sp.add_argument("--config", help="JSON config file (flags override it)")
        sp.add_argument("--tau", type=int, help="motion expansion gap in pixels (default 5)")
        sp.add_argument("--gamma", type=float, help="downsizing scale (default 0.1)")
        sp.add_argument("--components", "-c", type=int, help="principal components per gesture (default 10)")
        sp.add_argument("--modality", choices=["rgb-gray", "depth"])
        if jobs:
            sp.add_argument("--jobs", "-j", type=int, help="worker processes")

    sp = sub.add_parser("synth", help="generate a synthetic batch")
    sp.add_argument("--spec", help="JSON synth spec")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("train", help="fit one PCA model per training video")
    sp.add_argument("manifest")
    sp.add_argument("--model-out", "-o", required=True)
    params(sp)
    sp.set_defaults(func=cmd_train)

    for name, func, helptext in (("classify", cmd_classify, "predict label sequences"),
                                 ("segment", cmd_segment, "split videos into gesture spans")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--model", "-m", required=True)
        sp.add_argument("--manifest", help="use the test videos of this manifest")
        sp.add_argument("videos", nargs="*", help="frame directories")
        sp.add_argument("--out", "-o")
        params(sp)
        if name == "classify":
            sp.add_argument("--segmentation", default="auto", help="auto or manual:<spans.json>")
        sp.set_defaults(func=func)

    sp = sub.add_parser("score", help="Levenshtein score of predictions")
    sp.add_argument("manifest")
    sp.add_argument("predictions")
    sp.add_argument("--out", "-o")
    sp.add_argument("--tsv", help="append a one-line summary to this TSV file")
    sp.add_argument("--name", help="batch name for the TSV line")
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("dump", help="write motion maps or components as CSV")
    sp.add_argument("what", choices=["motion-maps", "coarse", "components"])
    sp.add_argument("--video")
    sp.add_argument("--model", "-m")
    sp.add_argument("--label", type=int)
    sp.add_argument("--top", type=int, default=3)
    sp.add_argument("--out", "-o")
    params(sp, jobs=False)
    sp.set_defaults(func=cmd_dump)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, ManifestError) as exc:
        print(f"pmc {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FrameFormatError, DimensionMismatchError, TrainingError, ScoringError, OSError, ValueError) as exc:
        print(f"pmc {args.command}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
