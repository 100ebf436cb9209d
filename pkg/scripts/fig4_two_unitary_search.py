"""M_TR ensembles: 2-unitary fractions for d = 3, 4 and the e_p asymptote at d = 5.

    python3 scripts/fig4_two_unitary_search.py --out results/fig4 --seeds 200
"""
import argparse
import json
from pathlib import Path

from duforge.ensemble import EnsembleConfig, d5_asymptote_check, run_ensemble
from duforge.matrix_io import write_matrix


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/fig4")
    ap.add_argument("--seeds", type=int, default=200)
    ap.add_argument("--iters", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--skip-d5", action="store_true")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    summary = {}
    for d in (3, 4):
        cfg = EnsembleConfig(d=d, map="M_TR", n_seeds=args.seeds, n_iter=args.iters, seed=args.seed,
                             workers=args.workers, keep_two_unitaries=True)
        rep = run_ensemble(cfg)
        rep.to_json(out / f"report_d{d}.json")
        rep.histograms_to_csv(out / f"hist_d{d}.csv")
        for i, U in enumerate(rep.two_unitaries()[:10]):
            write_matrix(out / f"two_unitary_d{d}_{i:02d}.mat", U, d, kind="two_unitary")
        summary[f"d{d}"] = rep.fractions
        print(f"d={d}: {rep.fractions} ({rep.wall_time:.0f}s)")
    if not args.skip_d5:
        res = d5_asymptote_check(n_seeds=min(args.seeds, 100), n_iter=args.iters, seed=args.seed)
        summary["d5"] = {"median_ratio": res.median_ratio, "n_two_unitary": res.n_two_unitary}
        print(f"d=5: median e_p/e_p^max = {res.median_ratio:.4f}")
    (out / "summary.json").write_text(json.dumps(summary, indent=1))


if __name__ == "__main__":
    main()
