"""Dense state vectors and the primitive operations that act on them.

Qubit 0 is the least-significant bit of a basis index. All amplitudes are
``complex128``; reductions go through :func:`math.fsum` so their value does
not depend on how the elementwise work was vectorised.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence, Union

import numpy as np

from .errors import ArgumentError

DTYPE = np.complex128
SQRT1_2 = 1.0 / math.sqrt(2.0)

Predicate = Callable[[int], object]


class StateVector:
    """``2**n_qubits`` complex amplitudes.

    The library never mutates a StateVector handed to it; every operation
    returns a fresh instance.
    """

    __slots__ = ("n_qubits", "amps")

    def __init__(self, n_qubits: int, amps):
        if n_qubits < 1:
            raise ArgumentError(f"n_qubits must be >= 1, got {n_qubits}")
        amps = np.asarray(amps, dtype=DTYPE)
        if amps.shape != (1 << n_qubits,):
            raise ArgumentError(
                f"expected {1 << n_qubits} amplitudes for {n_qubits} qubits, got shape {amps.shape}"
            )
        self.n_qubits = n_qubits
        self.amps = amps

    @classmethod
    def from_array(cls, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=DTYPE)
        dim = amps.shape[0]
        n = dim.bit_length() - 1
        if dim < 2 or (1 << n) != dim:
            raise ArgumentError(f"length {dim} is not a power of two >= 2")
        return cls(n, amps.copy())

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def copy(self) -> "StateVector":
        return StateVector(self.n_qubits, self.amps.copy())

    def norm(self) -> float:
        return math.sqrt(math.fsum(np.abs(self.amps) ** 2))

    def __repr__(self):
        return f"StateVector(n_qubits={self.n_qubits}, amps={np.array2string(self.amps, precision=4)})"


class OneQubitUnitary:
    """A 2x2 unitary; unitarity is checked at construction."""

    __slots__ = ("matrix", "name")

    def __init__(self, matrix, name: str | None = None, atol: float = 1e-12):
        m = np.array(matrix, dtype=DTYPE)
        if m.shape != (2, 2):
            raise ArgumentError(f"one-qubit gate must be 2x2, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ArgumentError("gate has non-finite entries")
        if not np.allclose(m.conj().T @ m, np.eye(2), rtol=0.0, atol=atol):
            raise ArgumentError(f"gate is not unitary within {atol}: {m.tolist()}")
        m.setflags(write=False)
        self.matrix = m
        self.name = name

    def dagger(self) -> "OneQubitUnitary":
        adj = self.matrix.conj().T
        name = self.name
        if name is not None and not np.array_equal(adj, self.matrix):
            name = name[:-4] if name.endswith("^dag") else name + "^dag"
        return OneQubitUnitary(adj, name=name)

    def __eq__(self, other):
        return isinstance(other, OneQubitUnitary) and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash(self.matrix.tobytes())

    def __repr__(self):
        label = self.name or "gate"
        return f"OneQubitUnitary({label}, {self.matrix.tolist()})"


M_GATE = OneQubitUnitary([[SQRT1_2, SQRT1_2], [SQRT1_2, -SQRT1_2]], name="M")
IDENTITY_GATE = OneQubitUnitary(np.eye(2), name="I")


def rotation_gate(k: int, n: int) -> OneQubitUnitary:
    """Per-qubit rotation that flips each bit with probability ``k/n``.

    Returns ``[[sqrt(1-k/n), -sqrt(k/n)], [sqrt(k/n), sqrt(1-k/n)]]``.
    """
    if not 0 < k < n:
        raise ArgumentError(f"rotation needs 0 < k < n, got k={k}, n={n}")
    p = k / n
    c, s = math.sqrt(1.0 - p), math.sqrt(p)
    return OneQubitUnitary([[c, -s], [s, c]], name=f"R({k}/{n})")


# -- basis sets ---------------------------------------------------------------

BasisLike = Union[Iterable[int], np.ndarray]


def basis_set(indices: BasisLike, n_qubits: int | None = None) -> np.ndarray:
    """Sorted, duplicate-free ``int64`` array of basis indices.

    When ``n_qubits`` is given every member is range-checked.
    """
    arr = np.unique(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices,
                               dtype=np.int64))
    if n_qubits is not None and arr.size:
        if arr[0] < 0 or arr[-1] >= (1 << n_qubits):
            raise ArgumentError(f"basis index out of range for {n_qubits} qubits")
    arr.setflags(write=False)
    return arr


def predicate_mask(f: Union[Predicate, BasisLike], n_qubits: int) -> np.ndarray:
    """Boolean mask over ``[0, 2**n_qubits)`` from a predicate or an index set."""
    dim = 1 << n_qubits
    if callable(f):
        return np.fromiter((bool(f(x)) for x in range(dim)), dtype=bool, count=dim)
    mask = np.zeros(dim, dtype=bool)
    mask[basis_set(f, n_qubits)] = True
    return mask


def _check_qubit(sv: StateVector, q: int):
    if not 0 <= q < sv.n_qubits:
        raise ArgumentError(f"qubit {q} out of range for {sv.n_qubits} qubits")


# -- in-place kernels (used by the program interpreter) -----------------------

def _pair_view(amps: np.ndarray, q: int) -> np.ndarray:
    # Axis 1 of the view selects bit q; trailing axes (batch columns) ride along.
    return amps.reshape((-1, 2, 1 << q) + amps.shape[1:])


def _one_qubit_inplace(amps: np.ndarray, matrix: np.ndarray, q: int):
    view = _pair_view(amps, q)
    lo = view[:, 0].copy()
    hi = view[:, 1]
    (g00, g01), (g10, g11) = matrix
    view[:, 0] = g00 * lo + g01 * hi
    view[:, 1] = g10 * lo + g11 * hi


def _walsh_hadamard_inplace(amps: np.ndarray, qubits: Sequence[int]):
    # Unnormalised butterflies, one pass per qubit, then a single scale.
    m = 0
    for q in qubits:
        view = _pair_view(amps, q)
        lo = view[:, 0].copy()
        view[:, 0] += view[:, 1]
        view[:, 1] *= -1
        view[:, 1] += lo
        m += 1
    if m:
        amps *= 2.0 ** (-m / 2)


def _phase_invert_inplace(amps: np.ndarray, indices: np.ndarray):
    amps[indices] *= -1


# -- public operations --------------------------------------------------------

def basis_state(n: int, i: int) -> StateVector:
    if n < 1:
        raise ArgumentError(f"n must be >= 1, got {n}")
    if not 0 <= i < (1 << n):
        raise ArgumentError(f"basis index {i} out of range for {n} qubits")
    amps = np.zeros(1 << n, dtype=DTYPE)
    amps[i] = 1.0
    return StateVector(n, amps)


def uniform_state(n: int) -> StateVector:
    return StateVector(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=DTYPE))


def apply_one_qubit(sv: StateVector, g: OneQubitUnitary, q: int) -> StateVector:
    _check_qubit(sv, q)
    out = sv.copy()
    _one_qubit_inplace(out.amps, g.matrix, q)
    return out


def walsh_hadamard(sv: StateVector, qubits: Sequence[int] | None = None) -> StateVector:
    """Apply M to every qubit in ``qubits`` (default: all of them).

    Amplitude ``y`` of the result is ``2**(-m/2) * sum_x (-1)**popcount(x & y) amp_x``
    over the transformed qubits.
    """
    if qubits is None:
        qubits = range(sv.n_qubits)
    for q in qubits:
        _check_qubit(sv, q)
    out = sv.copy()
    _walsh_hadamard_inplace(out.amps, list(qubits))
    return out


def selective_phase_inversion(sv: StateVector, S: Union[Predicate, BasisLike]) -> StateVector:
    """Negate the amplitudes on ``S`` (an index set or a membership predicate)."""
    if callable(S):
        idx = np.flatnonzero(predicate_mask(S, sv.n_qubits))
    else:
        idx = basis_set(S, sv.n_qubits)
    out = sv.copy()
    _phase_invert_inplace(out.amps, idx)
    return out


def global_negate(sv: StateVector) -> StateVector:
    return StateVector(sv.n_qubits, -sv.amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``sum_i conj(a_i) * b_i`` with an exactly rounded, order-independent sum."""
    if a.n_qubits != b.n_qubits:
        raise ArgumentError(f"dimension mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    prod = np.conj(a.amps) * b.amps
    return complex(math.fsum(prod.real), math.fsum(prod.imag))


def probability_of(sv: StateVector, S: BasisLike) -> float:
    idx = basis_set(S, sv.n_qubits)
    return math.fsum(np.abs(sv.amps[idx]) ** 2)


def ancilla_oracle_inversion(sv: StateVector, f: Union[Predicate, BasisLike]) -> StateVector:
    """Apply ``|x, b> -> |x, b XOR f(x)>`` with the ancilla as the top qubit.

    With the ancilla in ``(|0> - |1>)/sqrt(2)`` this flips the sign of every
    ``x`` with ``f(x) = 1`` and leaves the ancilla untouched.
    """
    if sv.n_qubits < 2:
        raise ArgumentError("ancilla oracle needs at least one data qubit plus the ancilla")
    n = sv.n_qubits - 1
    mask = predicate_mask(f, n)
    out = sv.copy()
    halves = out.amps.reshape(2, 1 << n)
    b0 = halves[0, mask].copy()
    halves[0, mask] = halves[1, mask]
    halves[1, mask] = b0
    return out


def tensor(low: StateVector, high: StateVector) -> StateVector:
    """Product state with ``low`` on the low qubits and ``high`` above them."""
    return StateVector(low.n_qubits + high.n_qubits, np.kron(high.amps, low.amps))


def hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()
