"""Reference gates with known entangling properties.

Includes permutation 2-unitaries |i, j> -> |L1(i, j), L2(i, j)> built from a
pair of mutually orthogonal Latin squares (MOLS).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

import numpy as np

from .errors import ExistenceError, ParameterError
from .measures import GateClass, classify
from .tensor_core import BipartiteUnitary, swap_gate

GATE_NAMES = ("identity", "swap", "cnot", "dcnot", "fourier", "ols")

_EXPECTED = {
    "identity": "T_dual",
    "swap": "dual",
    "cnot": "T_dual",
    "dcnot": "dual",
    "fourier": "dual",
    "ols": "two_unitary",
}


@dataclass(frozen=True)
class NamedGate:
    name: str
    d: int
    matrix: BipartiteUnitary
    expected_class: GateClass

    def __post_init__(self):
        got = classify(self.matrix.matrix, self.expected_class.tolerance)
        if got.label != self.expected_class.label:
            raise AssertionError(f"{self.name}(d={self.d}) classified {got.label}, "
                                 f"expected {self.expected_class.label}")

    def __array__(self, dtype=None, copy=None):
        return self.matrix.__array__(dtype)


def _named(name: str, M: np.ndarray, d: int) -> NamedGate:
    return NamedGate(name, d, BipartiteUnitary(d, M), GateClass(_EXPECTED[name], 1e-10))


def cnot_matrix() -> np.ndarray:
    """Control on A: |i, j> -> |i, i xor j>."""
    return permutation_gate(2, lambda i, j: (i, i ^ j))


def dcnot_matrix() -> np.ndarray:
    """CNOT followed by the CNOT with control and target exchanged."""
    rev = permutation_gate(2, lambda i, j: (i ^ j, j))
    return rev @ cnot_matrix()


def fourier_matrix(d: int) -> np.ndarray:
    N = d * d
    k = np.arange(N)
    return np.exp(2j * np.pi * np.outer(k, k) / N) / d


def permutation_gate(d: int, f) -> np.ndarray:
    """Matrix of |i, j> -> |f(i, j)>; f must be a bijection of Z_d x Z_d."""
    P = np.zeros((d * d, d * d), dtype=complex)
    for i, j in product(range(d), repeat=2):
        a, b = f(i, j)
        P[d * a + b, d * i + j] = 1.0
    if not np.allclose(P.sum(axis=0), 1) or not np.allclose(P.sum(axis=1), 1):
        raise ParameterError("map is not a bijection")
    return P


def named_gate(name: str, d: int = 2) -> NamedGate:
    if name not in GATE_NAMES:
        raise ParameterError(f"unknown gate {name!r}; choose from {GATE_NAMES}")
    if name == "ols":
        return ols_permutation(d)
    if name in ("cnot", "dcnot") and d != 2:
        raise ParameterError(f"{name} is only defined for d = 2")
    if d < 2:
        raise ParameterError("d must be >= 2")
    M = {
        "identity": lambda: np.eye(d * d, dtype=complex),
        "swap": lambda: swap_gate(d),
        "cnot": cnot_matrix,
        "dcnot": dcnot_matrix,
        "fourier": lambda: fourier_matrix(d),
    }[name]()
    return _named(name, M, d)


# --- finite fields and MOLS -------------------------------------------------

def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _polymod(a: list[int], m: list[int], p: int) -> list[int]:
    # coefficient lists, lowest degree first; m monic
    a = a[:]
    while len(a) >= len(m):
        c = a[-1] % p
        if c:
            shift = len(a) - len(m)
            for i, mc in enumerate(m):
                a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    return a


def _monic_polys(p: int, deg: int):
    for coeffs in product(range(p), repeat=deg):
        yield list(coeffs) + [1]


def _is_irreducible(m: list[int], p: int) -> bool:
    deg = len(m) - 1
    for k in range(1, deg // 2 + 1):
        for f in _monic_polys(p, k):
            if not any(_polymod(m, f, p)):
                return False
    return True


@lru_cache(maxsize=None)
def gf_tables(p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Addition and multiplication tables of GF(p**k).

    Element ``e`` encodes the polynomial whose base-p digits are its
    coefficients; the modulus is the first monic irreducible of degree k in
    lexicographic order.
    """
    q = p**k
    digits = [[(e // p**i) % p for i in range(k)] for e in range(q)]
    enc = lambda c: sum(int(x) * p**i for i, x in enumerate(c))  # noqa: E731
    add = np.array([[enc([(a + b) % p for a, b in zip(digits[x], digits[y])])
                     for y in range(q)] for x in range(q)])
    if k == 1:
        mod = [0, 1]
    else:
        mod = next(m for m in _monic_polys(p, k) if _is_irreducible(m, p))
    mul = np.zeros((q, q), dtype=int)
    for x in range(q):
        for y in range(q):
            prod = [0] * (2 * k - 1)
            for i, a in enumerate(digits[x]):
                for j, b in enumerate(digits[y]):
                    prod[i + j] = (prod[i + j] + a * b) % p
            r = _polymod(prod, mod, p) if k > 1 else [prod[0] % p]
            mul[x, y] = enc(r + [0] * (k - len(r)))
    return add, mul


def _prime_power_mols(p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    add, mul = gf_tables(p, k)
    q = p**k
    # L_a(i, j) = i + a*j with a in {1, 2}, which are distinct nonzero elements
    i = np.arange(q)[:, None]
    j = np.arange(q)[None, :]
    return add[i, mul[1, j]], add[i, mul[2, j]]


def _product_square(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # MacNeish direct product: ((a1, b1), (a2, b2)) -> (A[a1, a2], B[b1, b2])
    na, nb = len(A), len(B)
    return (A[:, None, :, None] * nb + B[None, :, None, :]).reshape(na * nb, na * nb)


def mols_pair(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Two mutually orthogonal Latin squares of order d, as integer arrays.

    Prime d uses i + k j mod d (k = 1, 2); prime powers use the same rule
    over GF(d); other orders are direct products of prime-power pairs, which
    needs every prime-power factor to be at least 3.
    """
    if d in (2, 6):
        raise ExistenceError(f"no pair of orthogonal Latin squares of order {d}")
    if d < 2:
        raise ParameterError("d must be >= 2")
    factors = _factor(d)
    if any(p**k == 2 for p, k in factors.items()):
        raise ExistenceError(f"no MOLS construction implemented for d = {d} (d = 2 mod 4)")
    L1 = L2 = None
    for p, k in sorted(factors.items()):
        A1, A2 = _prime_power_mols(p, k)
        L1 = A1 if L1 is None else _product_square(L1, A1)
        L2 = A2 if L2 is None else _product_square(L2, A2)
    return L1, L2


def is_latin(L: np.ndarray) -> bool:
    d = len(L)
    full = set(range(d))
    return all(set(row) == full for row in L) and all(set(col) == full for col in L.T)


def are_orthogonal(L1: np.ndarray, L2: np.ndarray) -> bool:
    d = len(L1)
    return len(set(zip(L1.ravel().tolist(), L2.ravel().tolist()))) == d * d


def ols_permutation(d: int) -> NamedGate:
    """Permutation 2-unitary |i, j> -> |L1(i, j), L2(i, j)>."""
    L1, L2 = mols_pair(d)
    M = permutation_gate(d, lambda i, j: (int(L1[i, j]), int(L2[i, j])))
    return _named("ols", M, d)
