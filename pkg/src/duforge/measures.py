"""Local-unitary invariants of bipartite gates.

All quantities derive from the operator Schmidt values ``lam_j``: the squared
singular values of the realigned operator.  For a unitary they sum to d**2 and
``p_j = lam_j / d**2`` is a probability vector.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .sampling import _rng, haar_product_state
from .tensor_core import local_dim, partial_transpose, realign

CLASS_LABELS = ("generic", "dual", "T_dual", "two_unitary")


def max_entanglement(d: int) -> float:
    """E(S) = 1 - 1/d**2, the largest operator entanglement in dimension d."""
    return 1.0 - 1.0 / d**2


def max_entangling_power(d: int) -> float:
    return (d - 1) / (d + 1)


def schmidt_spectrum(U) -> np.ndarray:
    """Operator Schmidt values of U, sorted descending (length d**2)."""
    s = np.linalg.svd(realign(U), compute_uv=False)
    return s**2


def _purity_entropy(M, d: int) -> np.ndarray:
    # 1 - tr[(M M^dag)^2] / d^4 without an SVD
    MM = M @ np.swapaxes(M.conj(), -1, -2)
    return 1.0 - np.sum(np.abs(MM) ** 2, axis=(-2, -1)) / d**4


def op_entanglement(U) -> float:
    """Linear operator entanglement E(U) = 1 - tr[(U^R U^R^dag)^2] / d^4."""
    U = np.asarray(U)
    return _purity_entropy(realign(U), local_dim(U))


def op_entanglement_swapped(U) -> float:
    """E(US), evaluated through the partial transpose of U."""
    U = np.asarray(U)
    return _purity_entropy(partial_transpose(U), local_dim(U))


def tsallis_from_spectrum(lam, d: int, q: float) -> float:
    if q <= 0 or q == 1:
        raise ParameterError(f"Tsallis exponent must be positive and != 1, got {q}")
    p = np.asarray(lam, dtype=float) / d**2
    p = np.where(np.abs(p) < 1e-14 / d**2, 0.0, p)
    p = np.clip(p, 0.0, None)
    return float((1.0 - np.sum(p**q)) / (q - 1.0))


def tsallis_entropy(U, q: float) -> float:
    """S_q = (1 - sum_j p_j^q) / (q - 1) over the operator Schmidt probabilities."""
    return tsallis_from_spectrum(schmidt_spectrum(U), local_dim(U), q)


def trace_norm_realigned(U) -> float:
    """||U^R||_1, the sum of singular values of the realigned operator."""
    return float(np.sum(np.linalg.svd(realign(U), compute_uv=False)))


def entangling_power_from(E_U, E_US, d: int):
    return d**2 * (E_U + E_US - max_entanglement(d)) / (d + 1) ** 2


def entangling_power(U) -> float:
    """Haar-averaged linear entropy generated on product states (closed form)."""
    U = np.asarray(U)
    d = local_dim(U)
    return float(entangling_power_from(op_entanglement(U), op_entanglement_swapped(U), d))


def product_state_entropies(U, n_samples: int, rng=None, chunk: int = 20_000) -> np.ndarray:
    """Linear entropies 1 - tr(rho_A^2) of U|psi_A>|psi_B> for Haar-random factors."""
    U = np.asarray(U, dtype=complex)
    d = local_dim(U)
    g = _rng(rng)
    vals = []
    done = 0
    while done < n_samples:
        m = min(chunk, n_samples - done)
        a, b = haar_product_state(d, g, size=(m,))
        inp = (a[:, :, None] * b[:, None, :]).reshape(m, d * d)
        out = (inp @ U.T).reshape(m, d, d)
        rho = out @ np.swapaxes(out.conj(), -1, -2)
        vals.append(1.0 - np.sum(np.abs(rho) ** 2, axis=(-2, -1)))
        done += m
    return np.concatenate(vals)


def entangling_power_mc(U, n_samples: int = 100_000, rng=None) -> tuple[float, float]:
    """Monte-Carlo estimate of the entangling power and its standard error."""
    if n_samples < 100:
        raise ParameterError("n_samples must be >= 100")
    v = product_state_entropies(U, n_samples, rng)
    return float(v.mean()), float(v.std(ddof=1) / np.sqrt(len(v)))


@dataclass(frozen=True)
class GateClass:
    label: str
    tolerance: float

    def __post_init__(self):
        if self.label not in CLASS_LABELS:
            raise ParameterError(f"unknown gate class {self.label!r}")

    @property
    def is_dual(self) -> bool:
        return self.label in ("dual", "two_unitary")

    @property
    def is_T_dual(self) -> bool:
        return self.label in ("T_dual", "two_unitary")

    def __str__(self):
        return self.label


def classify_values(E_U: float, E_US: float, d: int, tol: float = 1e-8) -> GateClass:
    if tol <= 0:
        raise ParameterError("tolerance must be positive")
    emax = max_entanglement(d)
    dual = emax - E_U < tol
    tdual = emax - E_US < tol
    if dual and tdual:
        label = "two_unitary"
    elif dual:
        label = "dual"
    elif tdual:
        label = "T_dual"
    else:
        label = "generic"
    return GateClass(label, tol)


def classify(U, tol: float = 1e-8) -> GateClass:
    """Label U by which of E(U), E(US) sit within ``tol`` of their maximum."""
    U = np.asarray(U)
    return classify_values(op_entanglement(U), op_entanglement_swapped(U), local_dim(U), tol)


@dataclass(frozen=True)
class MeasureRecord:
    d: int
    E_U: float
    E_US: float
    ep: float
    trace_norm_R: float
    tsallis: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"d": self.d, "E_U": self.E_U, "E_US": self.E_US, "ep": self.ep,
               "trace_norm_R": self.trace_norm_R}
        out["tsallis"] = {str(q): v for q, v in self.tsallis.items()}
        return out


def measure(U, qs=(0.5, 2.0, 3.0)) -> MeasureRecord:
    U = np.asarray(U)
    d = local_dim(U)
    lam = schmidt_spectrum(U)
    E_U = float(op_entanglement(U))
    E_US = float(op_entanglement_swapped(U))
    return MeasureRecord(
        d=d,
        E_U=E_U,
        E_US=E_US,
        ep=float(entangling_power_from(E_U, E_US, d)),
        trace_norm_R=float(np.sum(np.sqrt(lam))),
        tsallis={q: tsallis_from_spectrum(lam, d, q) for q in qs},
    )
