"""Ensembles of map trajectories seeded from the CUE.

Trajectory ``k`` starts from ``cue_sample(d**2, base_seed.substream(k))``, so a
report depends only on the config, never on scheduling or worker count.
"""
from __future__ import annotations

import csv
import json
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import InsufficientDataError, ParameterError, ResourceGuardError
from .maps import fit_decay, iterate, map_kind
from .measures import CLASS_LABELS, entangling_power, max_entangling_power, max_entanglement
from .sampling import RngSeed, cue_sample

MAX_GUARDED_DIM = 7
MONOTONIC_SLACK = 1e-9


def default_checkpoints(d: int, n_iter: int) -> tuple[int, ...]:
    base = {2: (0, 5, 10, 20), 3: (0, 10, 30, 100), 4: (0, 30, 100, 300)}.get(d, (0, 50, 200, 1000))
    return tuple(sorted({c for c in base if c <= n_iter} | {n_iter}))


@dataclass
class EnsembleConfig:
    d: int = 2
    n_seeds: int = 100
    map: str = "M_R"
    n_iter: int = 100
    record_every: int = 1
    class_tol: float = 1e-8
    histogram_bins: int = 30
    seed: int = 0
    stream: int = 0
    eps_gap: float = 1e-10
    checkpoints: tuple[int, ...] | None = None
    workers: int = 1
    keep_two_unitaries: bool = False
    override_dim_guard: bool = False

    def __post_init__(self):
        self.map = map_kind(self.map)
        for name in ("d", "n_seeds", "n_iter", "record_every", "histogram_bins", "workers"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be positive")
        if self.d < 2:
            raise ParameterError("d must be >= 2")
        if self.class_tol <= 0 or self.eps_gap <= 0:
            raise ParameterError("class_tol and eps_gap must be positive")
        if self.histogram_bins < 2:
            raise ParameterError("histogram_bins must be >= 2")
        if self.checkpoints is None:
            self.checkpoints = default_checkpoints(self.d, self.n_iter)
        self.checkpoints = tuple(sorted(int(c) for c in self.checkpoints if 0 <= int(c) <= self.n_iter))

    @property
    def base_seed(self) -> RngSeed:
        return RngSeed(self.seed, self.stream)

    @classmethod
    def from_mapping(cls, kv: dict) -> "EnsembleConfig":
        """Build from string values, e.g. a parsed key=value file."""
        types = {f.name: f.type for f in fields(cls)}
        out = {}
        for key, raw in kv.items():
            if key not in types:
                raise ParameterError(f"unknown config key {key!r}")
            t = str(types[key])
            if isinstance(raw, str):
                raw = raw.strip()
                if "bool" in t:
                    val = raw.lower() in ("1", "true", "yes", "on")
                elif key == "checkpoints":
                    val = tuple(int(x) for x in raw.replace(",", " ").split())
                elif "float" in t:
                    val = float(raw)
                elif "int" in t:
                    val = int(raw)
                else:
                    val = raw
            else:
                val = raw
            out[key] = val
        return cls(**out)

    @classmethod
    def from_file(cls, path, **overrides) -> "EnsembleConfig":
        return cls.from_mapping({**read_kv_file(path), **overrides})


def read_kv_file(path) -> dict[str, str]:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    kv = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key = value")
            k, v = line.split("=", 1)
            kv[k.strip().replace("-", "_")] = v.strip()
    return kv


@dataclass(frozen=True)
class Histogram:
    edges: np.ndarray
    density: np.ndarray

    @property
    def mass(self) -> float:
        return float(np.sum(self.density * np.diff(self.edges)))

    def mode_bin(self) -> int:
        return int(np.argmax(self.density))

    def to_dict(self) -> dict:
        return {"edges": self.edges.tolist(), "density": self.density.tolist()}


def histogram(values, bins: int, range: tuple[float, float]) -> Histogram:
    """Normalized density over explicit bins; values just outside ``range`` are clipped in."""
    v = np.asarray(values, dtype=float).ravel()
    if v.size == 0:
        raise InsufficientDataError("histogram of an empty sample")
    if bins < 2:
        raise ParameterError("bins must be >= 2")
    lo, hi = range
    v = np.clip(v, lo, hi)
    counts, edges = np.histogram(v, bins=bins, range=(lo, hi))
    width = np.diff(edges)
    return Histogram(edges, counts / (counts.sum() * width))


@dataclass
class SeedResult:
    index: int
    E_U: float
    E_US: float
    ep: float
    trace_norm: float
    label: str
    stop_reason: str
    n_steps: int
    checkpoints: dict[int, tuple[float, float]]
    decay_model: str | None = None
    decay_rate: float | None = None
    final_operator: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.pop("final_operator")
        out["checkpoints"] = {str(k): list(v) for k, v in self.checkpoints.items()}
        return out


def _check_monotonic(trace, index: int) -> None:
    tn = trace.column("trace_norm")
    if np.any(np.diff(tn) < -MONOTONIC_SLACK):
        k = int(np.argmin(np.diff(tn)))
        raise AssertionError(f"trace norm decreased along M_R trajectory {index} at step {k}")
    d = trace.d
    D2 = trace.column("D_n") ** 2
    if np.any(np.abs(D2 - (2 * d * d - 2 * np.asarray(trace.pre_trace_norm))) > MONOTONIC_SLACK):
        raise AssertionError(f"D_n identity violated on trajectory {index}")


def run_seed(cfg: EnsembleConfig, k: int) -> SeedResult:
    U0 = cue_sample(cfg.d**2, cfg.base_seed.substream(k))
    tr = iterate(U0, cfg.map, cfg.n_iter, eps_gap=cfg.eps_gap, record_every=cfg.record_every,
                 class_tol=cfg.class_tol, record_at=cfg.checkpoints)
    if cfg.map == "M_R":
        _check_monotonic(tr, k)
    by_n = {s.n: s for s in tr.steps}
    cps = {}
    for c in cfg.checkpoints:
        # a trajectory stopped before c sits at its final point
        s = by_n.get(c, tr.final if c > tr.final.n else None)
        cps[c] = (s.E_U, s.ep)
    model = rate = None
    if cfg.map == "M_R":
        try:
            fit = fit_decay(tr)
            model, rate = fit.model, fit.rate_or_exponent
        except InsufficientDataError:
            pass
    f = tr.final
    keep = cfg.keep_two_unitaries and f.cls.label == "two_unitary"
    return SeedResult(k, f.E_U, f.E_US, f.ep, f.trace_norm, f.cls.label, tr.stop_reason,
                      f.n, cps, model, rate, np.array(tr.final_operator) if keep else None)


def _run_chunk(args):
    cfg, ks = args
    return [run_seed(cfg, k) for k in ks]


def worker_count(requested: int) -> int:
    cap = os.environ.get("DUFORGE_THREADS")
    n = requested
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


@dataclass
class EnsembleReport:
    config: EnsembleConfig
    per_seed: list[SeedResult]
    histograms: dict[str, dict[int, Histogram]]
    fractions: dict[str, float]
    decay: dict
    concentration: dict[int, float]
    wall_time: float

    def two_unitaries(self) -> list[np.ndarray]:
        return [r.final_operator for r in self.per_seed if r.final_operator is not None]

    def to_dict(self) -> dict:
        cfg = asdict(self.config)
        cfg["checkpoints"] = list(self.config.checkpoints)
        return {
            "config": cfg,
            "fractions": self.fractions,
            "decay": self.decay,
            "concentration": {str(k): v for k, v in self.concentration.items()},
            "histograms": {q: {str(n): h.to_dict() for n, h in hs.items()}
                           for q, hs in self.histograms.items()},
            "per_seed": [r.to_dict() for r in self.per_seed],
            "wall_time": self.wall_time,
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)

    def histograms_to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["quantity", "n", "bin_lo", "bin_hi", "density"])
            for q, hs in self.histograms.items():
                for n, h in hs.items():
                    for lo, hi, dens in zip(h.edges[:-1], h.edges[1:], h.density):
                        w.writerow([q, n, repr(float(lo)), repr(float(hi)), repr(float(dens))])


def run_ensemble(cfg: EnsembleConfig) -> EnsembleReport:
    if cfg.d > MAX_GUARDED_DIM and not cfg.override_dim_guard:
        raise ResourceGuardError(f"d = {cfg.d} > {MAX_GUARDED_DIM} needs override_dim_guard")
    t0 = time.perf_counter()
    nw = worker_count(cfg.workers)
    ks = list(range(cfg.n_seeds))
    if nw == 1:
        results = [run_seed(cfg, k) for k in ks]
    else:
        chunks = [(cfg, ks[i::nw]) for i in range(nw)]
        with ProcessPoolExecutor(nw) as ex:
            results = [r for part in ex.map(_run_chunk, chunks) for r in part]
    results.sort(key=lambda r: r.index)

    d = cfg.d
    emax, epmax = max_entanglement(d), max_entangling_power(d)
    hists: dict[str, dict[int, Histogram]] = {"E_U": {}, "ep": {}}
    concentration = {}
    for c in cfg.checkpoints:
        E = np.array([r.checkpoints[c][0] for r in results])
        ep = np.array([r.checkpoints[c][1] for r in results])
        hists["E_U"][c] = histogram(E, cfg.histogram_bins, (0.0, emax))
        hists["ep"][c] = histogram(ep, cfg.histogram_bins, (0.0, epmax))
        concentration[c] = float(np.mean(emax - E < 1e-3))

    counts = Counter(r.label for r in results)
    fractions = {lab: counts.get(lab, 0) / len(results) for lab in CLASS_LABELS}
    decay = {"stop_reasons": dict(Counter(r.stop_reason for r in results))}
    models = [r.decay_model for r in results if r.decay_model]
    if models:
        decay["models"] = dict(Counter(models))
        decay["median_rate"] = float(np.median([r.decay_rate for r in results if r.decay_model]))
    return EnsembleReport(cfg, results, hists, fractions, decay, concentration,
                          time.perf_counter() - t0)


@dataclass(frozen=True)
class AsymptoteResult:
    median_ratio: float
    ratios: np.ndarray
    n_two_unitary: int


def d5_asymptote_check(n_seeds: int = 100, n_iter: int = 2000, seed: int = 0,
                       seeds=None, d: int = 5, class_tol: float = 1e-8) -> AsymptoteResult:
    """Median of e_p / e_p^max over M_TR-evolved seeds.

    ``seeds`` optionally replaces the CUE draws with explicit starting gates.
    """
    if n_iter < 1000 and seeds is None:
        raise ParameterError("n_iter must be >= 1000")
    if seeds is None:
        base = RngSeed(seed)
        seeds = (cue_sample(d * d, base.substream(k)) for k in range(n_seeds))
    ratios, n2u = [], 0
    for U0 in seeds:
        tr = iterate(U0, "M_TR", n_iter, record_every=n_iter, class_tol=class_tol)
        ratios.append(entangling_power(np.array(tr.final_operator)) / max_entangling_power(d))
        n2u += tr.final.cls.label == "two_unitary"
    ratios = np.array(ratios)
    return AsymptoteResult(float(np.median(ratios)), ratios, n2u)
