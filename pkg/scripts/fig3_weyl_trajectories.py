"""Two-qubit trajectories under M_R in the half Weyl chamber.

Seeds are CUE gates plus points on the chamber base (c1, c2, 0).  One CSV per
trajectory, plus e_p along the dual edge (pi/4, pi/4, c3).

    python3 scripts/fig3_weyl_trajectories.py --out results/fig3
"""
import argparse
import csv
from pathlib import Path

import numpy as np

from duforge.cartan2 import canonical_gate, chamber_trajectory, trajectory_to_csv
from duforge.measures import entangling_power
from duforge.sampling import RngSeed, cue_sample


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="results/fig3")
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--steps", type=int, default=30)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    base = RngSeed(args.seed, 2)
    for k in range(args.seeds):
        traj = chamber_trajectory(cue_sample(4, base.substream(k)), "M_R", args.steps)
        trajectory_to_csv(traj, out / f"cue_{k:03d}.csv")
        print(f"cue seed {k}: end ({traj[-1].c1:.6f}, {traj[-1].c2:.6f}, {traj[-1].c3:.6f})")
    for c1, c2 in [(0.2, 0.1), (0.5, 0.3), (0.7, 0.05)]:
        traj = chamber_trajectory(canonical_gate((c1, c2, 0.0)), "M_R", 3)
        trajectory_to_csv(traj, out / f"base_{c1:.2f}_{c2:.2f}.csv")

    with open(out / "dual_edge_ep.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["c3", "ep"])
        for c3 in np.linspace(0, np.pi / 4, 101):
            w.writerow([repr(float(c3)), repr(float(entangling_power(canonical_gate((np.pi / 4, np.pi / 4, c3)))))])


if __name__ == "__main__":
    main()
