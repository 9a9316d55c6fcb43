"""Generate one synthetic batch and compare ground-truth vs automatic segmentation.

    python3 scripts/run_synthetic.py --gestures 10 --noise 0.03 --tests 47
"""
import argparse

from _common import evaluate, make
from pmc.config import Config
from pmc.synth import SynthSpec


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gestures", type=int, default=8)
    p.add_argument("--static", type=int, default=0)
    p.add_argument("--tests", type=int, default=47)
    p.add_argument("--noise", type=float, default=0.03)
    p.add_argument("--shift", type=float, default=0.0, help="per-rendering shift jitter in pixels")
    p.add_argument("--tempo", type=float, default=0.0, help="per-rendering tempo jitter")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--components", type=int, default=10)
    args = p.parse_args()

    spec = SynthSpec(n_gestures=args.gestures, n_static=args.static, n_test=args.tests,
                     noise_sigma=args.noise, shift_jitter=args.shift, tempo_jitter=args.tempo,
                     seed=args.seed)
    manifest, root = make(spec)
    r = evaluate(manifest, root, Config(components=args.components))
    print(f"batch at {root}")
    print(f"ground-truth segmentation  score {r['truth']:.4f}  ({r['truth_time']:.1f}s)")
    print(f"automatic segmentation     score {r['auto']:.4f}  ({r['auto_time']:.1f}s)")


if __name__ == "__main__":
    main()
