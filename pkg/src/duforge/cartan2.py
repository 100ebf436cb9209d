"""Two-qubit nonlocal coordinates (c1, c2, c3) in the half Weyl chamber.

A two-qubit gate is locally equivalent to
``exp(-i (c1 XX + c2 YY + c3 ZZ))``; we report the representative with
``pi/4 >= c1 >= c2 >= c3 >= 0`` (gates with c3 and -c3 are identified).

Extraction only needs eigenvalues: in the magic basis local gates are real
orthogonal, so the spectrum of ``U_B^T U_B`` is a complete local invariant.
Its eigenphases are ``-2 theta_k`` where the ``theta_k`` are the canonical
phases on the four Bell states,

    Phi+ : c1 - c2 + c3     Phi- : -c1 + c2 + c3
    Psi+ : c1 + c2 - c3     Psi- : -c1 - c2 - c3

Any labelling of the eigenvalues yields a triple in the same Weyl-group
orbit, which is then folded into the half chamber.
"""
from __future__ import annotations

import csv
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError
from .maps import apply_map, map_kind
from .tensor_core import local_dim

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)
XX, YY, ZZ = np.kron(_X, _X), np.kron(_Y, _Y), np.kron(_Z, _Z)

MAGIC = np.array([[1, 1j, 0, 0],
                  [0, 0, 1j, 1],
                  [0, 0, 1j, -1],
                  [1, -1j, 0, 0]], dtype=complex) / np.sqrt(2)


class CartanCoords(NamedTuple):
    c1: float
    c2: float
    c3: float


def _check_qubits(U) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if local_dim(U) != 2:
        raise DimensionError("Cartan coordinates are only defined for two qubits (d = 2)")
    return U


def fold_to_half_chamber(c) -> CartanCoords:
    """Fold an arbitrary triple into pi/4 >= c1 >= c2 >= c3 >= 0."""
    c = np.asarray(c, dtype=float)
    half = np.pi / 2
    c = c - half * np.round(c / half)  # each c_j -> c_j + pi/2 is local
    c = np.sort(np.abs(c))[::-1]
    return CartanCoords(*(float(x) for x in c))


def cartan_coords(U) -> CartanCoords:
    U = _check_qubits(U)
    U = U / np.linalg.det(U) ** 0.25
    Ub = MAGIC.conj().T @ U @ MAGIC
    z = np.linalg.eigvals(Ub.T @ Ub)
    theta = -np.angle(z) / 2
    # eigenphases are known mod pi; make them sum to zero
    theta = np.sort(theta)[::-1]
    s = int(np.round(theta.sum() / np.pi))
    if s > 0:
        theta[:s] -= np.pi
    elif s < 0:
        theta[s:] += np.pi
    t_pp, t_pm, t_sp, _ = theta
    return fold_to_half_chamber([(t_pp + t_sp) / 2, (t_pm + t_sp) / 2, (t_pp + t_pm) / 2])


def canonical_gate(c) -> np.ndarray:
    c1, c2, c3 = c
    return expm(-1j * (c1 * XX + c2 * YY + c3 * ZZ))


def local_invariants(U) -> np.ndarray:
    """Makhlin invariants (Re G1, Im G1, G2); equal iff locally equivalent."""
    U = _check_qubits(U)
    U = U / np.linalg.det(U) ** 0.25
    Ub = MAGIC.conj().T @ U @ MAGIC
    m = Ub.T @ Ub
    tr = np.trace(m)
    g1 = tr**2 / 16
    g2 = (tr**2 - np.trace(m @ m)) / 4
    return np.array([g1.real, g1.imag, g2.real])


def chamber_trajectory(U0, kind: str = "M_R", n: int = 20) -> list[CartanCoords]:
    """Coordinates of U_0 .. U_n under repeated application of a map."""
    kind = map_kind(kind)
    U = _check_qubits(U0)
    out = [cartan_coords(U)]
    for _ in range(n):
        U = apply_map(U, kind)
        out.append(cartan_coords(U))
    return out


def trajectory_to_csv(traj: list[CartanCoords], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["n", "c1", "c2", "c3"])
        for k, c in enumerate(traj):
            w.writerow([k, repr(c.c1), repr(c.c2), repr(c.c3)])
