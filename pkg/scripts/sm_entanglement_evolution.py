"""Histograms of E(U_n) at checkpoints along M_R, showing concentration at the maximum.

    python3 scripts/sm_entanglement_evolution.py --out results/sm_evolution --d 3 --seeds 1000
"""
import argparse
from pathlib import Path

from duforge.ensemble import EnsembleConfig, run_ensemble


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/sm_evolution")
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--seeds", type=int, default=1000)
    ap.add_argument("--iters", type=int, default=None)
    ap.add_argument("--bins", type=int, default=40)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    n_iter = args.iters or {2: 20, 3: 100, 4: 300}.get(args.d, 1000)
    rep = run_ensemble(EnsembleConfig(d=args.d, n_seeds=args.seeds, map="M_R", n_iter=n_iter,
                                      histogram_bins=args.bins, seed=args.seed))
    rep.histograms_to_csv(out / f"hist_d{args.d}.csv")
    for n, c in rep.concentration.items():
        print(f"n={n}: fraction within 1e-3 of the maximum {c:.3f}")


if __name__ == "__main__":
    main()
