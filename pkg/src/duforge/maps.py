"""Nearest-unitary projection and the reshuffle-then-project maps.

``M_R``  : U -> polar(U^R)
``M_T``  : U -> polar(U^{T_A})
``M_TR`` : U -> polar((U^R)^{T_A})
``M_RT_alternating`` : M_T after M_R (two projections per step)
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InsufficientDataError, ParameterError
from .measures import (
    GateClass,
    classify_values,
    entangling_power_from,
    max_entanglement,
    op_entanglement,
    op_entanglement_swapped,
)
from .tensor_core import BipartiteUnitary, local_dim, partial_transpose, realign

MAP_KINDS = ("M_R", "M_T", "M_TR", "M_RT_alternating")
_ALIASES = {"MR": "M_R", "MT": "M_T", "MTR": "M_TR", "MRT": "M_RT_alternating"}

GAUGE_TOL = 1e-12


def map_kind(label: str) -> str:
    """Normalize a map label; accepts the short CLI spellings MR, MT, MTR, MRT."""
    kind = _ALIASES.get(label, label)
    if kind not in MAP_KINDS:
        raise ParameterError(f"unknown map {label!r}; choose from {MAP_KINDS}")
    return kind


class Projection(NamedTuple):
    unitary: np.ndarray
    singular_values: np.ndarray
    gauge_degenerate: bool

    @property
    def distance_sq(self) -> float:
        """||M - V||_HS^2 = sum_i (s_i - 1)^2."""
        return float(np.sum((self.singular_values - 1.0) ** 2))

    @property
    def trace_norm(self) -> float:
        return float(np.sum(self.singular_values))


def project_unitary(M) -> Projection:
    """Polar factor of M via SVD, with its singular values.

    When M has a (numerically) zero singular value the minimizer is not
    unique; the SVD's choice is returned and ``gauge_degenerate`` is set.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ParameterError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ParameterError("matrix has non-finite entries")
    P, s, Qh = np.linalg.svd(M)
    scale = max(1.0, float(s[0]))
    return Projection(P @ Qh, s, bool(s[-1] <= GAUGE_TOL * scale))


def nearest_unitary(M) -> np.ndarray:
    """Unitary closest to M in Hilbert-Schmidt norm (the polar factor P Q^dag)."""
    return project_unitary(M).unitary


def _reshuffle_for(kind: str):
    if kind == "M_R":
        return realign
    if kind == "M_T":
        return partial_transpose
    if kind == "M_TR":
        return lambda X: partial_transpose(realign(X))
    raise ParameterError(f"no single reshuffle for {kind!r}")


def apply_map_info(U, kind: str) -> Projection:
    """One map step; the returned projection carries the pre-projection spectrum.

    For ``M_RT_alternating`` the singular values are those of the first (M_R)
    projection and the degeneracy flag is the OR of both.
    """
    kind = map_kind(kind)
    if kind == "M_RT_alternating":
        first = project_unitary(realign(U))
        second = project_unitary(partial_transpose(first.unitary))
        return Projection(second.unitary, first.singular_values,
                          first.gauge_degenerate or second.gauge_degenerate)
    return project_unitary(_reshuffle_for(kind)(np.asarray(U)))


def apply_map(U, kind: str) -> np.ndarray:
    return apply_map_info(U, kind).unitary


def fix_global_phase(U) -> np.ndarray:
    """Rotate U so its first (row-major) near-maximal-modulus entry is real and positive."""
    U = np.asarray(U)
    a = np.abs(U).ravel()
    k = int(np.argmax(a >= a.max() * (1 - 1e-9)))  # ties broken by position, not by rounding noise
    z = U.flat[k]
    return U * (abs(z) / z) if z != 0 else U.copy()


def equal_up_to_phase(U, V, atol: float = 1e-10) -> bool:
    """True when U = e^{i phi} V entrywise within atol, for the best phi."""
    U, V = np.asarray(U), np.asarray(V)
    z = np.vdot(U, V)
    phase = z / abs(z) if z != 0 else 1.0
    return bool(np.allclose(U * phase, V, atol=atol))


def default_max_iter(d: int) -> int:
    return 100 if d <= 3 else 2000


@dataclass(frozen=True)
class StepRecord:
    n: int
    E_U: float
    E_US: float
    ep: float
    trace_norm: float
    D_n: float
    cls: GateClass

    def row(self) -> dict:
        return {"n": self.n, "E_U": self.E_U, "E_US": self.E_US, "ep": self.ep,
                "trace_norm": self.trace_norm, "D_n": self.D_n, "class": self.cls.label}


TRACE_COLUMNS = ("n", "E_U", "E_US", "ep", "trace_norm", "D_n", "class")


@dataclass
class IterationTrace:
    """Recorded trajectory of a map.

    ``trace_norm`` is ||U_n^R||_1.  ``D_n`` is the distance from the
    pre-projection matrix of U_n to its nearest unitary, and ``pre_trace_norm``
    is that matrix's trace norm, so D_n^2 = 2 d^2 - 2 pre_trace_norm.  For M_R
    the two trace norms coincide.
    """

    d: int
    kind: str
    steps: list[StepRecord]
    final_operator: BipartiteUnitary
    stop_reason: str
    pre_trace_norm: list[float] = field(default_factory=list)
    gauge_degenerate: bool = False

    def column(self, name: str) -> np.ndarray:
        if name == "class":
            return np.array([s.cls.label for s in self.steps])
        return np.array([getattr(s, name) for s in self.steps])

    @property
    def final(self) -> StepRecord:
        return self.steps[-1]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=TRACE_COLUMNS)
            w.writeheader()
            for s in self.steps:
                w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in s.row().items()})

    def to_dict(self) -> dict:
        return {
            "d": self.d,
            "map": self.kind,
            "stop_reason": self.stop_reason,
            "gauge_degenerate": self.gauge_degenerate,
            "steps": [s.row() for s in self.steps],
        }

    def to_json(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=1)


def _gap(kind: str, E_U: float, E_US: float, d: int) -> float:
    emax = max_entanglement(d)
    if kind == "M_R":
        return emax - E_U
    if kind == "M_T":
        return emax - E_US
    # entangling-power gap for the 2-unitary seeking maps
    return (d - 1) / (d + 1) - entangling_power_from(E_U, E_US, d)


def iterate(
    U0,
    kind: str = "M_R",
    max_iter: int | None = None,
    eps_gap: float = 1e-10,
    record_every: int = 1,
    class_tol: float = 1e-8,
    stall_window: int = 100,
    stall_tol: float = 1e-13,
    record_at=(),
    stop_early: bool = True,
) -> IterationTrace:
    """Iterate ``kind`` from U0 until the relevant entropy gap drops below ``eps_gap``.

    The gap is E(S) - E(U_n) for M_R, E(S) - E(US_n) for M_T and the
    entangling-power gap for M_TR and the alternating map.  The run is declared
    stalled when the gap has moved by less than ``stall_tol`` over the last
    ``stall_window`` steps while still above ``eps_gap``.  Steps are recorded
    every ``record_every`` iterations, at every n in ``record_at`` and at the
    last step.  With ``stop_early=False`` exactly ``max_iter`` steps are taken.
    """
    kind = map_kind(kind)
    U = np.array(U0, dtype=complex)
    d = local_dim(U)
    if max_iter is None:
        max_iter = default_max_iter(d)
    if max_iter < 1 or record_every < 1:
        raise ParameterError("max_iter and record_every must be >= 1")
    if eps_gap <= 0:
        raise ParameterError("eps_gap must be positive")

    record_at = frozenset(record_at)
    steps: list[StepRecord] = []
    pre_norms: list[float] = []
    gaps: list[float] = []
    degenerate = False
    stop = "max_iter"
    n = 0
    while True:
        proj = apply_map_info(U, kind)
        degenerate |= proj.gauge_degenerate
        E_U = float(op_entanglement(U))
        E_US = float(op_entanglement_swapped(U))
        gap = _gap(kind, E_U, E_US, d)
        gaps.append(gap)
        if stop_early:
            if gap < eps_gap:
                stop = "converged"
            elif len(gaps) > stall_window and max(abs(g - gap) for g in gaps[-stall_window - 1:]) < stall_tol:
                stop = "stalled"
        elif n == max_iter and gap < eps_gap:
            stop = "converged"
        last = stop != "max_iter" or n == max_iter
        if n % record_every == 0 or n in record_at or last:
            if kind == "M_R":
                tn = proj.trace_norm
            else:
                tn = float(np.sum(np.linalg.svd(realign(U), compute_uv=False)))
            steps.append(StepRecord(
                n=n, E_U=E_U, E_US=E_US, ep=float(entangling_power_from(E_U, E_US, d)),
                trace_norm=tn, D_n=math.sqrt(proj.distance_sq),
                cls=classify_values(E_U, E_US, d, class_tol),
            ))
            pre_norms.append(proj.trace_norm)
        if last:
            break
        U = proj.unitary
        n += 1
    return IterationTrace(d, kind, steps, BipartiteUnitary(d, U), stop, pre_norms, degenerate)


@dataclass(frozen=True)
class DecayFit:
    model: str
    rate_or_exponent: float
    goodness: float
    rss_exponential: float
    rss_power_law: float
    n_points: int


def _linfit(x, y):
    A = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    rss = float(resid @ resid)
    tss = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - rss / tss if tss > 0 else 1.0
    return coef[0], rss, r2


def fit_decay(trace_or_n, gaps=None, n_min: int = 1, n_max: int | None = None,
              floor: float = 1e-14) -> DecayFit:
    """Fit the gap decay as exp(-alpha n) and as n^(-alpha); keep the smaller RSS.

    Accepts an :class:`IterationTrace` (the gap is E(S) - E(U_n)) or explicit
    ``(n, gaps)`` arrays.  Points with n outside [n_min, n_max] or a gap
    below ``floor`` are dropped.
    """
    if isinstance(trace_or_n, IterationTrace):
        tr = trace_or_n
        n = tr.column("n").astype(float)
        gaps = max_entanglement(tr.d) - tr.column("E_U")
    else:
        n = np.asarray(trace_or_n, dtype=float)
        gaps = np.asarray(gaps, dtype=float)
    if len(n) < 20:
        raise InsufficientDataError(f"need at least 20 recorded steps, got {len(n)}")
    keep = (n >= max(n_min, 1)) & (gaps > floor)
    if n_max is not None:
        keep &= n <= n_max
    n, gaps = n[keep], gaps[keep]
    if len(n) < 10:
        raise InsufficientDataError(f"only {len(n)} usable points after truncation")
    y = np.log(gaps)
    slope_e, rss_e, r2_e = _linfit(n, y)
    slope_p, rss_p, r2_p = _linfit(np.log(n), y)
    if rss_e <= rss_p:
        return DecayFit("exponential", float(-slope_e), r2_e, rss_e, rss_p, len(n))
    return DecayFit("power_law", float(-slope_p), r2_p, rss_e, rss_p, len(n))
