"""Score both segmentation modes over a grid of noise and jitter levels.

Prints one TSV row per setting; a few minutes on one core with defaults.
"""
import argparse
import itertools

from _common import evaluate, make
from pmc.config import Config
from pmc.synth import SynthSpec


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--gestures", type=int, default=12)
    p.add_argument("--tests", type=int, default=30)
    p.add_argument("--noise", type=float, nargs="+", default=[0.0, 0.03, 0.05, 0.1])
    p.add_argument("--shift", type=float, nargs="+", default=[0.0, 4.0, 8.0])
    p.add_argument("--tempo", type=float, nargs="+", default=[0.0, 0.25])
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    print("noise\tshift\ttempo\ttruth\tauto")
    for noise, shift, tempo in itertools.product(args.noise, args.shift, args.tempo):
        spec = SynthSpec(n_gestures=args.gestures, n_test=args.tests, noise_sigma=noise,
                         shift_jitter=shift, tempo_jitter=tempo, seed=args.seed)
        r = evaluate(*make(spec), Config())
        print(f"{noise}\t{shift}\t{tempo}\t{r['truth']:.4f}\t{r['auto']:.4f}", flush=True)


if __name__ == "__main__":
    main()
