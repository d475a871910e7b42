"""Dense matrices built from definitions, independent of the butterfly kernels.

Used only to check the operator path on small registers.
"""

from __future__ import annotations

from functools import reduce

import numpy as np

from .errors import RefusalError

ORACLE_QUBIT_LIMIT = 12


def _guard(n):
    if n > ORACLE_QUBIT_LIMIT:
        raise RefusalError(f"dense oracle refused for {n} qubits (limit {ORACLE_QUBIT_LIMIT})")


def dense_walsh(n: int) -> np.ndarray:
    """Entry ``(x, y)`` is ``2**(-n/2) * (-1)**popcount(x & y)``."""
    _guard(n)
    idx = np.arange(1 << n)
    parity = np.vectorize(lambda v: bin(int(v)).count("1") & 1)(idx[:, None] & idx[None, :])
    return np.where(parity, -1.0, 1.0).astype(complex) * 2.0 ** (-n / 2)


def dense_phase(n: int, S) -> np.ndarray:
    _guard(n)
    d = np.ones(1 << n, dtype=complex)
    for s in S:
        d[s] = -1.0
    return np.diag(d)


def dense_tensor(gate: np.ndarray, n: int) -> np.ndarray:
    """``gate`` on every qubit; qubit 0 is the least-significant index bit."""
    _guard(n)
    return reduce(np.kron, [np.asarray(gate, dtype=complex)] * n)


def dense_single(gate: np.ndarray, q: int, n: int) -> np.ndarray:
    _guard(n)
    mats = [np.eye(2, dtype=complex)] * n
    mats[n - 1 - q] = np.asarray(gate, dtype=complex)
    return reduce(np.kron, mats)


def dense_Q(U: np.ndarray, S, T) -> np.ndarray:
    """``-I_S U^dagger I_T U`` by matrix products."""
    n = U.shape[0].bit_length() - 1
    return -dense_phase(n, S) @ U.conj().T @ dense_phase(n, T) @ U
