"""Index reshuffling on bipartite operators and the operator-state isomorphism.

Composite indices follow ``n = d*i + j`` with ``i`` on subsystem A and ``j`` on
subsystem B.  A matrix of order d**2 is viewed as a rank-4 tensor
``U[i, j, k, l] = <i j|U|k l>`` by ``U.reshape(d, d, d, d)``; every reshuffle
below is a transpose of that tensor, so they are exact permutations of entries.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt

import numpy as np

from .errors import DegenerateInputError, DimensionError, PreconditionError

UNITARITY_TOL = 1e-10


def local_dim(X) -> int:
    """Return d for a square matrix of order d**2 (d >= 2).

    Leading axes are treated as a batch of matrices.
    """
    X = np.asarray(X)
    if X.ndim < 2 or X.shape[-1] != X.shape[-2]:
        raise DimensionError(f"expected a square matrix, got shape {X.shape}")
    n = X.shape[-1]
    d = isqrt(n)
    if d * d != n or d < 2:
        raise DimensionError(f"order {n} is not d**2 for an integer d >= 2")
    return d


def hs_norm(X) -> float:
    return float(np.linalg.norm(X))


def unitarity_defect(X) -> float:
    """Hilbert-Schmidt norm of X^dag X - I."""
    X = np.asarray(X)
    return float(np.linalg.norm(X.conj().T @ X - np.eye(X.shape[0])))


@dataclass(frozen=True)
class BipartiteUnitary:
    """A unitary of order d**2 on C^d (x) C^d, validated on construction."""

    d: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if local_dim(m) != self.d:
            raise DimensionError(f"matrix of order {m.shape[0]} does not match d={self.d}")
        if not np.all(np.isfinite(m)):
            raise PreconditionError("matrix has non-finite entries")
        defect = unitarity_defect(m)
        if defect > UNITARITY_TOL * self.d**2:
            raise PreconditionError(f"matrix is not unitary (defect {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, X) -> "BipartiteUnitary":
        return cls(local_dim(X), X)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)


def _reshuffle(X, perm: tuple[int, ...]) -> np.ndarray:
    X = np.asarray(X)
    d = local_dim(X)
    batch = X.shape[:-2]
    nb = len(batch)
    axes = tuple(range(nb)) + tuple(nb + p for p in perm)
    return X.reshape(batch + (d, d, d, d)).transpose(axes).reshape(batch + (d * d, d * d))


def realign(X) -> np.ndarray:
    """Realignment: <n m|X^R|a b> = <n a|X|m b>."""
    return _reshuffle(X, (0, 2, 1, 3))


def partial_transpose(X) -> np.ndarray:
    """Transpose on the A factor: <m a|X^{T_A}|n b> = <n a|X|m b>."""
    return _reshuffle(X, (2, 1, 0, 3))


def swap_gate(d: int) -> np.ndarray:
    """Permutation |i j> -> |j i> on C^d (x) C^d."""
    if d < 2:
        raise DimensionError("d must be >= 2")
    S = np.zeros((d * d, d * d), dtype=complex)
    for i in range(d):
        for j in range(d):
            S[d * j + i, d * i + j] = 1.0
    return S


def max_entangled_state(d: int) -> np.ndarray:
    """|Phi+> = sum_i |i i> / sqrt(d)."""
    return np.eye(d, dtype=complex).reshape(d * d) / np.sqrt(d)


def vectorize_operator(X, normalize: bool = True) -> np.ndarray:
    """Map X to (X (x) I)|Phi+>, i.e. its row-vectorization divided by sqrt(d).

    The result has unit norm whenever X is unitary.  With ``normalize=True``
    (the default) any nonzero X is rescaled to a unit vector.
    """
    X = np.asarray(X, dtype=complex)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {X.shape}")
    v = X.reshape(-1) / np.sqrt(X.shape[0])
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise DegenerateInputError("cannot vectorize the zero operator")
    return v / nrm if normalize else v


@dataclass(frozen=True)
class FourPartyState:
    """Pure state on A (x) A' (x) B (x) B'; ``amplitudes`` has shape (d, d, d, d)."""

    d: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        psi = np.array(self.amplitudes, dtype=complex).reshape(self.d, self.d, self.d, self.d)
        psi.setflags(write=False)
        object.__setattr__(self, "amplitudes", psi)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def ame_state(U) -> FourPartyState:
    """State |U> = (U_AB (x) I_A'B') |Phi+>_AA' |Phi+>_BB' in the order (A, A', B, B')."""
    U = np.asarray(U, dtype=complex)
    d = local_dim(U)
    phi = max_entangled_state(d)
    # (A, A', B, B') -> (A, B, A', B') so U acts on the first pair
    pp = np.kron(phi, phi).reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    out = (U @ pp).reshape(d, d, d, d).transpose(0, 2, 1, 3)
    return FourPartyState(d, out)


def _linear_entropy_of_cut(psi: np.ndarray, keep: tuple[int, int]) -> float:
    """1 - tr(rho^2) for the reduced state on the two kept parties."""
    rest = tuple(ax for ax in range(4) if ax not in keep)
    d = psi.shape[0]
    M = psi.transpose(keep + rest).reshape(d * d, d * d)
    rho = M @ M.conj().T
    return float(1.0 - np.real(np.vdot(rho, rho)))


def bipartition_entropies(state: FourPartyState) -> tuple[float, float, float]:
    """Linear entropies across AB|A'B', AA'|BB' and A'B|AB'.

    Computed by explicit partial traces of the four-party state; the last two
    equal E(U) and E(US) of the generating gate.
    """
    if abs(state.norm - 1.0) > 1e-10:
        raise PreconditionError(f"state is not normalized (norm {state.norm!r})")
    psi = state.amplitudes
    # axes: 0=A, 1=A', 2=B, 3=B'
    return (
        _linear_entropy_of_cut(psi, (0, 2)),
        _linear_entropy_of_cut(psi, (0, 1)),
        _linear_entropy_of_cut(psi, (1, 2)),
    )
