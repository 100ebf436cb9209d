"""Command-line interface.

    duforge sample   --d 3 --count 10 --seed 7 --out cue.mat
    duforge measure  cue.mat
    duforge iterate  cue.mat --map MTR --n 2000 --trace-out trace.csv --final-out final.mat
    duforge ensemble run.cfg --n-seeds 200 --out report.json --hist-out hist.csv
    duforge cartan   gate:cnot --n 20 --map MR
    duforge gates    list | export ols --d 3 --out ols3.mat
    duforge ame      gate:ols:3
    duforge states   gate:ols:3 --samples 100000 --out ent.csv

Matrix inputs are file paths or ``gate:NAME[:d]`` for a built-in gate.
Failures exit nonzero with one JSON line ``{"error": ..., "message": ...}`` on stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .cartan2 import cartan_coords, chamber_trajectory, trajectory_to_csv
from .ensemble import EnsembleConfig, histogram, read_kv_file, run_ensemble
from .errors import DuforgeError, MatrixFileError
from .gates import GATE_NAMES, named_gate
from .maps import iterate, map_kind
from .matrix_io import read_matrix, write_matrix
from .measures import classify, max_entanglement, measure, product_state_entropies
from .sampling import RngSeed, cue_sample
from .tensor_core import ame_state, bipartition_entropies, local_dim, unitarity_defect


def load_operator(source: str) -> np.ndarray:
    if source.startswith("gate:"):
        parts = source.split(":")
        d = int(parts[2]) if len(parts) > 2 else (3 if parts[1] == "ols" else 2)
        return np.array(named_gate(parts[1], d))
    M, _ = read_matrix(source)
    local_dim(M)
    return M


def _out_paths(out: str, count: int) -> list[Path]:
    p = Path(out)
    if count == 1:
        return [p]
    return [p.with_name(f"{p.stem}_{k:04d}{p.suffix or '.mat'}") for k in range(count)]


def cmd_sample(args) -> int:
    base = RngSeed(args.seed, args.stream)
    paths = _out_paths(args.out, args.count)
    for k, path in enumerate(paths):
        U = cue_sample(args.d**2, base.substream(k))
        try:
            write_matrix(path, U, args.d, kind="cue")
        except OSError as exc:
            raise MatrixFileError(f"cannot write {path}: {exc}") from exc
    print(json.dumps({"written": [str(p) for p in paths]}))
    return 0


def cmd_measure(args) -> int:
    U = load_operator(args.input)
    rec = measure(U).as_dict()
    rec["class"] = classify(U, args.tol).label
    rec["unitarity_defect"] = unitarity_defect(U)
    print(json.dumps(rec))
    return 0


def cmd_iterate(args) -> int:
    U = load_operator(args.input)
    tr = iterate(U, args.map, args.n, eps_gap=args.eps, record_every=args.record_every,
                 class_tol=args.tol)
    if args.trace_out:
        if args.trace_out.endswith(".json"):
            tr.to_json(args.trace_out)
        else:
            tr.to_csv(args.trace_out)
    if args.final_out:
        write_matrix(args.final_out, np.array(tr.final_operator), tr.d, kind=tr.kind)
    f = tr.final.row()
    f["stop_reason"] = tr.stop_reason
    f["gauge_degenerate"] = tr.gauge_degenerate
    print(json.dumps(f))
    return 0


_FLAG_KEYS = ("d", "n_seeds", "map", "n_iter", "record_every", "class_tol", "histogram_bins",
              "seed", "stream", "eps_gap", "workers", "override_dim_guard", "keep_two_unitaries")


def cmd_ensemble(args) -> int:
    kv = read_kv_file(args.config) if args.config else {}
    flags = {}
    for k in _FLAG_KEYS:
        v = getattr(args, k)
        if v is not None and v is not False:
            flags[k] = v
    if args.dump_dir:
        flags["keep_two_unitaries"] = True
    cfg = EnsembleConfig.from_mapping({**kv, **flags})
    rep = run_ensemble(cfg)
    if args.out:
        rep.to_json(args.out)
    if args.hist_out:
        rep.histograms_to_csv(args.hist_out)
    if args.dump_dir:
        dd = Path(args.dump_dir)
        dd.mkdir(parents=True, exist_ok=True)
        for r in rep.per_seed:
            if r.final_operator is not None:
                write_matrix(dd / f"two_unitary_{r.index:05d}.mat", r.final_operator, cfg.d,
                             kind="two_unitary")
    print(json.dumps({"fractions": rep.fractions, "decay": rep.decay,
                      "wall_time": rep.wall_time}))
    return 0


def cmd_cartan(args) -> int:
    U = load_operator(args.input)
    if args.n is None:
        print(" ".join(repr(c) for c in cartan_coords(U)))
        return 0
    traj = chamber_trajectory(U, args.map, args.n)
    if args.out:
        trajectory_to_csv(traj, args.out)
    else:
        print("n,c1,c2,c3")
        for k, c in enumerate(traj):
            print(f"{k},{c.c1!r},{c.c2!r},{c.c3!r}")
    return 0


def cmd_gates(args) -> int:
    if args.action == "list":
        for name in GATE_NAMES:
            print(name)
        return 0
    if not args.name:
        raise DuforgeError("gates export needs a gate name")
    g = named_gate(args.name, args.d)
    out = args.out or f"{args.name}_d{args.d}.mat"
    write_matrix(out, np.array(g), g.d, kind=args.name)
    print(json.dumps({"written": out, "class": g.expected_class.label}))
    return 0


def cmd_ame(args) -> int:
    U = load_operator(args.input)
    d = local_dim(U)
    ents = bipartition_entropies(ame_state(U))
    print(json.dumps({"d": d, "max": max_entanglement(d), "AB|A'B'": ents[0],
                      "AA'|BB'": ents[1], "A'B|AB'": ents[2],
                      "ame": bool(all(max_entanglement(d) - e < args.tol for e in ents))}))
    return 0


def cmd_states(args) -> int:
    U = load_operator(args.input)
    d = local_dim(U)
    v = product_state_entropies(U, args.samples, RngSeed(args.seed, args.stream))
    h = histogram(v, args.bins, (0.0, 1.0 - 1.0 / d))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("bin_lo,bin_hi,density\n")
            for lo, hi, dens in zip(h.edges[:-1], h.edges[1:], h.density):
                fh.write(f"{lo!r},{hi!r},{dens!r}\n")
    print(json.dumps({"mean": float(v.mean()), "std": float(v.std()), "samples": len(v)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="duforge", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def seeded(p):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--stream", type=int, default=0)

    p = sub.add_parser("sample", help="write CUE matrices")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--out", required=True)
    seeded(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("measure", help="print invariants as JSON")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("iterate", help="run a map trajectory")
    p.add_argument("input")
    p.add_argument("--map", type=map_kind, default="M_R")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--eps", type=float, default=1e-10)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--trace-out")
    p.add_argument("--final-out")
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("ensemble", help="run an ensemble from a key=value config")
    p.add_argument("config", nargs="?")
    p.add_argument("--d", type=int)
    p.add_argument("--n-seeds", dest="n_seeds", type=int)
    p.add_argument("--map", type=map_kind)
    p.add_argument("--n", dest="n_iter", type=int)
    p.add_argument("--record-every", dest="record_every", type=int)
    p.add_argument("--eps", dest="eps_gap", type=float)
    p.add_argument("--tol", dest="class_tol", type=float)
    p.add_argument("--bins", dest="histogram_bins", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--stream", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--override-dim-guard", dest="override_dim_guard", action="store_true")
    p.add_argument("--keep-two-unitaries", dest="keep_two_unitaries", action="store_true")
    p.add_argument("--out", help="report JSON")
    p.add_argument("--hist-out", help="histogram CSV")
    p.add_argument("--dump-dir", help="directory for final 2-unitary matrices")
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("cartan", help="two-qubit Weyl-chamber coordinates")
    p.add_argument("input")
    p.add_argument("--n", type=int, default=None, help="trajectory length")
    p.add_argument("--map", type=map_kind, default="M_R")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("gates", help="list or export reference gates")
    p.add_argument("action", choices=("list", "export"))
    p.add_argument("name", nargs="?")
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gates)

    p = sub.add_parser("ame", help="bipartition entropies of the four-party state")
    p.add_argument("input")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_ame)

    p = sub.add_parser("states", help="entanglement of outputs on Haar product states")
    p.add_argument("input")
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--out")
    seeded(p)
    p.set_defaults(func=cmd_states)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DuforgeError, OSError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
