"""Ground-truth-segmented score as a function of components, gamma and tau.

Uses a jittered noisy batch so the settings actually separate.
"""
import argparse

from _common import evaluate, make
from pmc.config import Config
from pmc.synth import SynthSpec


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--components", type=int, nargs="+", default=[1, 2, 5, 10, 20])
    p.add_argument("--gamma", type=float, nargs="+", default=[0.05, 0.1, 0.2])
    p.add_argument("--tau", type=int, nargs="+", default=[0, 5])
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--shift", type=float, default=8.0)
    p.add_argument("--tempo", type=float, default=0.25)
    p.add_argument("--seed", type=int, default=0)
    args = p.parse_args()

    spec = SynthSpec(n_gestures=12, n_test=30, noise_sigma=args.noise, shift_jitter=args.shift,
                     tempo_jitter=args.tempo, seed=args.seed)
    manifest, root = make(spec)
    print("tau\tgamma\tcomponents\tscore")
    for tau in args.tau:
        for gamma in args.gamma:
            for c in args.components:
                r = evaluate(manifest, root, Config(tau=tau, gamma=gamma, components=c), "truth")
                print(f"{tau}\t{gamma}\t{c}\t{r['truth']:.4f}", flush=True)


if __name__ == "__main__":
    main()
