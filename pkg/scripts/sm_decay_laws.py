"""Large-n decay of the M_R entropy gap for d = 4..7 with exponential/power-law fits.

    python3 scripts/sm_decay_laws.py --out results/sm_decay --seeds 5 --steps 5000
"""
import argparse
import csv
from pathlib import Path

from duforge.maps import fit_decay, iterate
from duforge.measures import max_entanglement
from duforge.sampling import RngSeed, cue_sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/sm_decay")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--dims", type=int, nargs="+", default=[4, 5, 6, 7])
    ap.add_argument("--steps", type=int, default=5000)
    ap.add_argument("--every", type=int, default=10)
    ap.add_argument("--n-min", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    with open(out / "fits.csv", "w", newline="") as fits:
        fw = csv.writer(fits)
        fw.writerow(["d", "seed", "model", "rate_or_exponent", "r2", "rss_exp", "rss_pow"])
        for d in args.dims:
            base = RngSeed(args.seed, d)
            for k in range(args.seeds):
                tr = iterate(cue_sample(d * d, base.substream(k)), "M_R", args.steps,
                             record_every=args.every, stop_early=False)
                with open(out / f"gap_d{d}_s{k}.csv", "w", newline="") as fh:
                    w = csv.writer(fh)
                    w.writerow(["n", "gap"])
                    for s in tr.steps:
                        w.writerow([s.n, repr(max_entanglement(d) - s.E_U)])
                f = fit_decay(tr, n_min=args.n_min, n_max=args.steps)
                fw.writerow([d, k, f.model, f.rate_or_exponent, f.goodness, f.rss_exponential,
                             f.rss_power_law])
                print(f"d={d} seed={k}: {f.model} {f.rate_or_exponent:.3f} (R2 {f.goodness:.3f})")


if __name__ == "__main__":
    main()
