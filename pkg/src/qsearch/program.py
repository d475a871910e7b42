"""Unitary programs: invertible sequences of primitive operations.

A program never stores a dense matrix. Its inverse is built primitive by
primitive, so ``invert_program(p)`` is exact by construction; the dense
form exists only as a test oracle (:func:`to_dense_matrix`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

from .errors import ArgumentError, RefusalError
from .statevector import (
    DTYPE,
    BasisLike,
    OneQubitUnitary,
    StateVector,
    _one_qubit_inplace,
    _phase_invert_inplace,
    _walsh_hadamard_inplace,
    basis_set,
    basis_state,
)

DENSE_QUBIT_LIMIT = 12


@dataclass(frozen=True)
class OneQubit:
    gate: OneQubitUnitary
    qubit: int


@dataclass(frozen=True)
class WalshHadamard:
    """M on each listed qubit; ``qubits=None`` means every qubit."""

    qubits: tuple | None = None


@dataclass(frozen=True, eq=False)
class PhaseInvert:
    indices: np.ndarray

    def __init__(self, indices: BasisLike):
        object.__setattr__(self, "indices", basis_set(indices))

    def __eq__(self, other):
        return isinstance(other, PhaseInvert) and np.array_equal(self.indices, other.indices)

    def __hash__(self):
        return hash(self.indices.tobytes())


@dataclass(frozen=True)
class Negate:
    pass


@dataclass(frozen=True, eq=False)
class BasisPermutation:
    """Sends basis state ``i`` to basis state ``perm[i]``."""

    perm: np.ndarray

    def __init__(self, perm):
        arr = np.asarray(perm, dtype=np.int64).copy()
        if arr.ndim != 1 or not np.array_equal(np.sort(arr), np.arange(arr.size)):
            raise ArgumentError("BasisPermutation needs a bijection on [0, len)")
        arr.setflags(write=False)
        object.__setattr__(self, "perm", arr)

    def __eq__(self, other):
        return isinstance(other, BasisPermutation) and np.array_equal(self.perm, other.perm)

    def __hash__(self):
        return hash(self.perm.tobytes())


@dataclass(frozen=True)
class Repeat:
    body: "UnitaryProgram"
    count: int


Primitive = Union[OneQubit, WalshHadamard, PhaseInvert, Negate, BasisPermutation, Repeat]


@dataclass(frozen=True)
class UnitaryProgram:
    """``n_qubits`` plus primitives in application order (first applied first)."""

    n_qubits: int
    primitives: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        if self.n_qubits < 1:
            raise ArgumentError(f"n_qubits must be >= 1, got {self.n_qubits}")
        for prim in self.primitives:
            _validate(prim, self.n_qubits)

    def __len__(self):
        return len(self.primitives)

    def __iter__(self):
        return iter(self.primitives)

    def then(self, *prims: Primitive) -> "UnitaryProgram":
        return UnitaryProgram(self.n_qubits, self.primitives + tuple(prims))


def _validate(prim, n):
    dim = 1 << n
    if isinstance(prim, OneQubit):
        if not isinstance(prim.gate, OneQubitUnitary):
            raise ArgumentError("OneQubit needs a OneQubitUnitary")
        if not 0 <= prim.qubit < n:
            raise ArgumentError(f"qubit {prim.qubit} out of range for {n} qubits")
    elif isinstance(prim, WalshHadamard):
        if prim.qubits is not None:
            if len(set(prim.qubits)) != len(prim.qubits):
                raise ArgumentError("WalshHadamard qubits must be distinct")
            if any(not 0 <= q < n for q in prim.qubits):
                raise ArgumentError(f"WalshHadamard qubit out of range for {n} qubits")
    elif isinstance(prim, PhaseInvert):
        if prim.indices.size and (prim.indices[0] < 0 or prim.indices[-1] >= dim):
            raise ArgumentError(f"PhaseInvert index out of range for {n} qubits")
    elif isinstance(prim, BasisPermutation):
        if prim.perm.size != dim:
            raise ArgumentError(f"BasisPermutation has size {prim.perm.size}, expected {dim}")
    elif isinstance(prim, Repeat):
        if prim.body.n_qubits != n:
            raise ArgumentError("Repeat body qubit count does not match the program")
        if prim.count < 0:
            raise ArgumentError("Repeat count must be >= 0")
    elif not isinstance(prim, Negate):
        raise ArgumentError(f"unknown primitive {prim!r}")


# -- construction helpers -----------------------------------------------------

def program(n_qubits: int, *prims: Primitive) -> UnitaryProgram:
    return UnitaryProgram(n_qubits, prims)


def gate_on_all(gate: OneQubitUnitary, n_qubits: int, qubits: Iterable[int] | None = None) -> UnitaryProgram:
    qs = range(n_qubits) if qubits is None else qubits
    return UnitaryProgram(n_qubits, [OneQubit(gate, q) for q in qs])


def permutation_from_partial(mapping: Mapping[int, int], n_qubits: int) -> BasisPermutation:
    """Complete an injective partial map to a bijection on ``[0, 2**n_qubits)``.

    Each chain ``a -> b -> ... -> e`` of the partial map is closed into a
    cycle by sending its free end ``e`` back to its start ``a``. Indices not
    touched by the map stay fixed.
    """
    dim = 1 << n_qubits
    src = list(mapping)
    dst = list(mapping.values())
    if len(set(dst)) != len(dst):
        raise ArgumentError("partial map is not injective")
    for v in src + dst:
        if not 0 <= v < dim:
            raise ArgumentError(f"index {v} out of range for {n_qubits} qubits")
    perm = np.arange(dim, dtype=np.int64)
    for a, b in mapping.items():
        perm[a] = b
    in_range = set(dst)
    for start in sorted(set(src) - in_range):
        end = start
        while end in mapping:
            end = mapping[end]
        perm[end] = start
    return BasisPermutation(perm)


# -- interpreter --------------------------------------------------------------

def _run(amps: np.ndarray, prims: Sequence[Primitive], n: int) -> np.ndarray:
    """Apply ``prims`` to ``amps`` (shape ``(dim,)`` or ``(dim, batch)``), mostly in place."""
    for prim in prims:
        if isinstance(prim, WalshHadamard):
            _walsh_hadamard_inplace(amps, range(n) if prim.qubits is None else prim.qubits)
        elif isinstance(prim, PhaseInvert):
            _phase_invert_inplace(amps, prim.indices)
        elif isinstance(prim, Negate):
            np.negative(amps, out=amps)
        elif isinstance(prim, OneQubit):
            _one_qubit_inplace(amps, prim.gate.matrix, prim.qubit)
        elif isinstance(prim, BasisPermutation):
            out = np.empty_like(amps)
            out[prim.perm] = amps
            amps = out
        elif isinstance(prim, Repeat):
            for _ in range(prim.count):
                amps = _run(amps, prim.body.primitives, n)
        else:
            raise ArgumentError(f"unknown primitive {prim!r}")
    return amps


def apply_program(sv: StateVector, p: UnitaryProgram) -> StateVector:
    if sv.n_qubits != p.n_qubits:
        raise ArgumentError(f"state has {sv.n_qubits} qubits, program has {p.n_qubits}")
    amps = _run(sv.amps.copy(), p.primitives, p.n_qubits)
    return StateVector(sv.n_qubits, amps)


def invert_primitive(prim: Primitive) -> Primitive:
    if isinstance(prim, OneQubit):
        return OneQubit(prim.gate.dagger(), prim.qubit)
    if isinstance(prim, (WalshHadamard, PhaseInvert, Negate)):
        return prim
    if isinstance(prim, BasisPermutation):
        return BasisPermutation(np.argsort(prim.perm))
    if isinstance(prim, Repeat):
        return Repeat(invert_program(prim.body), prim.count)
    raise ArgumentError(f"unknown primitive {prim!r}")


def invert_program(p: UnitaryProgram) -> UnitaryProgram:
    return UnitaryProgram(p.n_qubits, [invert_primitive(x) for x in reversed(p.primitives)])


def compose(*programs: UnitaryProgram) -> UnitaryProgram:
    """Concatenate programs; the first argument is applied first."""
    if not programs:
        raise ArgumentError("compose needs at least one program")
    n = programs[0].n_qubits
    prims = []
    for q in programs:
        if q.n_qubits != n:
            raise ArgumentError(f"dimension mismatch: {n} vs {q.n_qubits} qubits")
        prims.extend(q.primitives)
    return UnitaryProgram(n, prims)


def to_dense_matrix(p: UnitaryProgram) -> np.ndarray:
    """Column ``i`` is the program applied to basis state ``i``."""
    if p.n_qubits > DENSE_QUBIT_LIMIT:
        raise RefusalError(
            f"dense matrix refused for {p.n_qubits} qubits (limit {DENSE_QUBIT_LIMIT})"
        )
    dim = 1 << p.n_qubits
    return _run(np.eye(dim, dtype=DTYPE), p.primitives, p.n_qubits)


def amplitude_between(p: UnitaryProgram, s: int, t: int) -> complex:
    """``U_ts``: amplitude at ``t`` after applying the program to ``|s>``."""
    dim = 1 << p.n_qubits
    if not 0 <= t < dim:
        raise ArgumentError(f"target index {t} out of range for {p.n_qubits} qubits")
    return complex(apply_program(basis_state(p.n_qubits, s), p).amps[t])


def count_ops(p: Union[UnitaryProgram, Primitive]) -> int:
    """Number of leaf primitives executed by one application (Repeat bodies expanded)."""
    if isinstance(p, UnitaryProgram):
        return sum(count_ops(x) for x in p.primitives)
    if isinstance(p, Repeat):
        return p.count * count_ops(p.body)
    return 1
