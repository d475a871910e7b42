"""Seeded random programs for property tests and the verify suite."""

from __future__ import annotations

import numpy as np

from .program import (
    BasisPermutation,
    Negate,
    OneQubit,
    PhaseInvert,
    Repeat,
    UnitaryProgram,
    WalshHadamard,
)
from .statevector import OneQubitUnitary, StateVector

_KINDS = ("onequbit", "wh", "phase", "negate", "perm", "repeat")
_WEIGHTS = (0.45, 0.15, 0.15, 0.05, 0.1, 0.1)


def random_gate(rng: np.random.Generator) -> OneQubitUnitary:
    """Haar-random 2x2 unitary (QR of a complex Gaussian, phases fixed)."""
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return OneQubitUnitary(q * (d / np.abs(d)))


def random_primitive(n: int, rng: np.random.Generator, allow_repeat: bool = True):
    kind = rng.choice(_KINDS, p=_WEIGHTS)
    dim = 1 << n
    if kind == "repeat" and not allow_repeat:
        kind = "onequbit"
    if kind == "onequbit":
        return OneQubit(random_gate(rng), int(rng.integers(n)))
    if kind == "wh":
        if rng.random() < 0.5:
            return WalshHadamard()
        size = int(rng.integers(1, n + 1))
        return WalshHadamard(tuple(sorted(int(q) for q in rng.choice(n, size, replace=False))))
    if kind == "phase":
        size = int(rng.integers(1, max(2, dim // 4) + 1))
        return PhaseInvert(rng.choice(dim, size, replace=False))
    if kind == "negate":
        return Negate()
    if kind == "perm":
        return BasisPermutation(rng.permutation(dim))
    body = [random_primitive(n, rng, allow_repeat=False) for _ in range(int(rng.integers(1, 4)))]
    return Repeat(UnitaryProgram(n, body), int(rng.integers(1, 4)))


def random_program(n: int, length: int, rng: np.random.Generator, allow_repeat: bool = True) -> UnitaryProgram:
    return UnitaryProgram(n, [random_primitive(n, rng, allow_repeat) for _ in range(length)])


def random_state(n: int, rng: np.random.Generator, real: bool = False) -> StateVector:
    v = rng.standard_normal(1 << n)
    if not real:
        v = v + 1j * rng.standard_normal(1 << n)
    return StateVector(n, v / np.linalg.norm(v))
