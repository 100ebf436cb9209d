"""E(U_n) along M_R trajectories from CUE seeds, d = 2..5.

Writes one CSV per d with columns n, seed, E_U, gap, and a summary with the
ensemble mean at every step.

    python3 scripts/fig1_mr_convergence.py --out results/fig1 --seeds 20
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from duforge.maps import iterate
from duforge.measures import max_entanglement
from duforge.sampling import RngSeed, cue_sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/fig1")
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4, 5])
    ap.add_argument("--steps", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for d in args.dims:
        base = RngSeed(args.seed, d)
        curves = []
        with open(out / f"trajectories_d{d}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "seed", "E_U", "gap"])
            for k in range(args.seeds):
                tr = iterate(cue_sample(d * d, base.substream(k)), "M_R", args.steps, stop_early=False)
                E = tr.column("E_U")
                curves.append(E)
                for n, e in zip(tr.column("n"), E):
                    w.writerow([int(n), k, repr(float(e)), repr(max_entanglement(d) - float(e))])
        mean = np.mean(curves, axis=0)
        with open(out / f"mean_d{d}.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "mean_E_U", "max"])
            for n, m in enumerate(mean):
                w.writerow([n, repr(float(m)), repr(max_entanglement(d))])
        print(f"d={d}: mean E at n=0 {mean[0]:.4f}, at n={args.steps} {mean[-1]:.10f}")


if __name__ == "__main__":
    main()
