"""Reproducible Haar sampling.

Every draw is keyed by an :class:`RngSeed` ``(seed, stream)``.  The pair is fed
to numpy's ``SeedSequence`` as entropy plus spawn key, and the resulting PCG64
bit generator drives ``Generator.standard_normal`` (ziggurat method).  The same
pair therefore reproduces the same samples bit for bit on one platform, and
distinct streams are statistically independent, so trajectories may be
evaluated in any order or in parallel.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class RngSeed:
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not 0 <= v <= _MASK64:
                raise ParameterError(f"{name} must be an unsigned 64-bit integer, got {v}")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, k: int) -> "RngSeed":
        """Seed for trajectory ``k`` derived from this one."""
        return RngSeed(self.seed, (self.stream * 1_000_003 + k) & _MASK64)


def _rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngSeed):
        return rng.generator()
    if rng is None or isinstance(rng, (int, np.integer)):
        return RngSeed(int(rng or 0)).generator()
    raise TypeError(f"cannot build a generator from {type(rng).__name__}")


def ginibre(N: int, rng, size: tuple[int, ...] = ()) -> np.ndarray:
    """Complex Ginibre matrices with E|z|^2 = 1."""
    g = _rng(rng)
    shape = size + (N, N)
    return (g.standard_normal(shape) + 1j * g.standard_normal(shape)) / np.sqrt(2.0)


def cue_sample(N: int, rng=None, size: tuple[int, ...] = ()) -> np.ndarray:
    """Haar-random unitary of order N (stacked if ``size`` is given).

    QR of a Ginibre matrix with the phases of diag(R) absorbed into Q, which
    makes the distribution exactly Haar (Mezzadri's correction).
    """
    if N < 1:
        raise ParameterError("matrix order must be >= 1")
    Z = ginibre(N, rng, size)
    Q, R = np.linalg.qr(Z)
    diag = np.diagonal(R, axis1=-2, axis2=-1)
    ph = diag / np.abs(diag)
    return Q * ph[..., None, :]


def haar_state(d: int, rng=None, size: tuple[int, ...] = ()) -> np.ndarray:
    """Uniformly distributed unit vectors in C^d, shape ``size + (d,)``."""
    g = _rng(rng)
    shape = size + (d,)
    v = g.standard_normal(shape) + 1j * g.standard_normal(shape)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def haar_product_state(d: int, rng=None, size: tuple[int, ...] = ()) -> tuple[np.ndarray, np.ndarray]:
    """Independent Haar factors (psi_A, psi_B)."""
    if d < 2:
        raise ParameterError("d must be >= 2")
    g = _rng(rng)
    return haar_state(d, g, size), haar_state(d, g, size)
