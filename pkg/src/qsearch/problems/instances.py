"""Problem instances for the structured-search drivers.

Two-register problems put ``x`` on the low qubits and ``y`` above it, so the
joint index of ``(x, y)`` is ``x | (y << nx)``. Multi-dimensional problems
stack their axes the same way, first axis lowest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from ..errors import RefusalError, ValidationError
from ..program import UnitaryProgram
from ..statevector import hamming

MULTIDIM_QUBIT_LIMIT = 14


def _check_index(name, value, n):
    if not 0 <= value < (1 << n):
        raise ValidationError(f"{name}={value} out of range for {n} qubits")


def _is_pow2(m):
    return m > 0 and not m & (m - 1)


@dataclass(frozen=True)
class Exhaustive:
    n: int
    t: int
    s: int = 0

    def validate(self):
        if self.n < 1:
            raise ValidationError("n must be >= 1")
        _check_index("t", self.t, self.n)
        _check_index("s", self.s, self.n)

    def parameters(self):
        return {"n": self.n, "t": self.t, "s": self.s}


@dataclass(frozen=True)
class Nearby:
    n: int
    k: int
    r: int
    t: int

    def validate(self):
        if not 0 < self.k < self.n:
            raise ValidationError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        _check_index("r", self.r, self.n)
        _check_index("t", self.t, self.n)
        if hamming(self.r, self.t) != self.k:
            raise ValidationError(
                f"r and t differ in {hamming(self.r, self.t)} bits, expected exactly k={self.k}"
            )

    def parameters(self):
        return {"n": self.n, "k": self.k, "r": self.r, "t": self.t}


@dataclass(frozen=True)
class SymmetricMulti:
    U: UnitaryProgram
    S: tuple
    T: tuple

    def validate(self):
        for s in self.S:
            _check_index("s", s, self.U.n_qubits)
        for t in self.T:
            _check_index("t", t, self.U.n_qubits)
        if not _is_pow2(len(set(self.S))):
            raise ValidationError(f"|S| = {len(set(self.S))} is not a power of two")

    def parameters(self):
        return {"n": self.U.n_qubits, "S": sorted(self.S), "T": sorted(self.T), "U_len": len(self.U)}


@dataclass(frozen=True)
class MultiTarget:
    n: int
    T: tuple

    def validate(self):
        N = 1 << self.n
        beta = len(set(self.T))
        if len(self.T) != beta:
            raise ValidationError("target list has duplicates")
        if not 1 <= beta <= N // 4:
            raise ValidationError(f"need 1 <= beta <= N/4 = {N // 4}, got beta={beta}")
        for t in self.T:
            _check_index("t", t, self.n)

    def parameters(self):
        return {"n": self.n, "T": sorted(self.T)}


@dataclass(frozen=True)
class MultiSource:
    n: int
    k: int
    S: tuple
    t: int

    def validate(self):
        if not 0 < self.k < self.n:
            raise ValidationError(f"need 0 < k < n, got k={self.k}, n={self.n}")
        _check_index("t", self.t, self.n)
        if len(set(self.S)) != len(self.S):
            raise ValidationError("source list has duplicates")
        if not _is_pow2(len(self.S)):
            raise ValidationError(f"|S| = {len(self.S)} is not a power of two")
        for s in self.S:
            _check_index("s", s, self.n)
            if hamming(s, self.t) != self.k:
                raise ValidationError(
                    f"source {s} differs from t in {hamming(s, self.t)} bits, expected k={self.k}"
                )

    def parameters(self):
        return {"n": self.n, "k": self.k, "S": list(self.S), "t": self.t}


@dataclass(frozen=True)
class CompositeV:
    n: int
    S: tuple
    t: int
    U: UnitaryProgram

    @property
    def a(self) -> int:
        return len(self.S).bit_length() - 1

    def validate(self):
        if self.U.n_qubits != self.n:
            raise ValidationError("U qubit count does not match n")
        if len(set(self.S)) != len(self.S):
            raise ValidationError("source list has duplicates")
        if not _is_pow2(len(self.S)):
            raise ValidationError(f"|S| = {len(self.S)} is not a power of two")
        for s in self.S:
            _check_index("s", s, self.n)
        _check_index("t", self.t, self.n)
        if self.t == 0:
            raise ValidationError("t = 0 coincides with the all-zeros start state")

    def parameters(self):
        return {"n": self.n, "S": list(self.S), "t": self.t, "U_len": len(self.U)}


@dataclass(frozen=True)
class TwoDim:
    """Find ``(t1, t2)``; ``G`` lists the x values where the helper ``g`` is non-zero."""

    nx: int
    ny: int
    G: tuple
    t1: int
    t2: int

    @property
    def M(self) -> int:
        return len(set(self.G))

    def validate(self):
        if self.nx < 1 or self.ny < 1:
            raise ValidationError("both registers need at least one qubit")
        for g in self.G:
            _check_index("g", g, self.nx)
        if len(set(self.G)) != len(self.G):
            raise ValidationError("G has duplicates")
        _check_index("t1", self.t1, self.nx)
        _check_index("t2", self.t2, self.ny)
        if self.t1 not in self.G:
            raise ValidationError(f"t1={self.t1} is not in G")
        if self.t2 == 0:
            raise ValidationError("t2 = 0 coincides with the y-register start state")

    def parameters(self):
        return {"nx": self.nx, "ny": self.ny, "G": sorted(self.G), "t1": self.t1, "t2": self.t2}


@dataclass(frozen=True)
class Rectangular(TwoDim):
    """Same construction as :class:`TwoDim` with ``N1 = 2**nx`` and ``N2 = 2**ny`` allowed to differ."""


@dataclass(frozen=True)
class MultiDim:
    """``d`` axes of ``q`` qubits each.

    ``levels[j]`` (``j = 0..d-2``) holds the non-zero points of the helper that
    looks at the first ``j + 1`` coordinates, encoded as the low ``(j+1)*q``
    bits of a joint index. Every prefix that appears in a level must have
    the same number of completions there.
    """

    d: int
    q: int
    levels: tuple
    target: tuple

    @property
    def n_qubits(self) -> int:
        return self.d * self.q

    def prefix(self, j: int) -> int:
        """Joint index of the target restricted to its first ``j`` coordinates."""
        return sum(self.target[i] << (i * self.q) for i in range(j))

    def fanout(self, j: int) -> int:
        """Number of non-zero completions per prefix at level ``j``."""
        lvl = set(self.levels[j])
        if j == 0:
            return len(lvl)
        mask = (1 << (j * self.q)) - 1
        counts = {}
        for v in lvl:
            counts[v & mask] = counts.get(v & mask, 0) + 1
        return counts[self.prefix(j)]

    def validate(self):
        if self.d < 2 or self.q < 1:
            raise ValidationError("need d >= 2 axes of at least one qubit")
        if self.n_qubits > MULTIDIM_QUBIT_LIMIT:
            raise ValidationError(
                f"{self.n_qubits} qubits exceeds the desk-scale limit of {MULTIDIM_QUBIT_LIMIT}"
            )
        if len(self.target) != self.d or len(self.levels) != self.d - 1:
            raise ValidationError("need d target coordinates and d-1 helper levels")
        for x in self.target:
            _check_index("target coordinate", x, self.q)
        if self.target[-1] == 0:
            raise ValidationError("last target coordinate 0 coincides with the start state")
        for j, lvl in enumerate(self.levels):
            width = (j + 1) * self.q
            for v in lvl:
                _check_index(f"level {j} point", v, width)
            if self.prefix(j + 1) not in set(lvl):
                raise ValidationError(f"level {j} does not contain the target prefix")
            if j:
                mask = (1 << (j * self.q)) - 1
                counts = {}
                for v in set(lvl):
                    counts[v & mask] = counts.get(v & mask, 0) + 1
                if len(set(counts.values())) != 1:
                    raise ValidationError(f"level {j} has unequal completion counts per prefix")

    def parameters(self):
        return {
            "d": self.d,
            "q": self.q,
            "levels": [sorted(lvl) for lvl in self.levels],
            "target": list(self.target),
        }


@dataclass(frozen=True)
class TwoDimMultiTarget:
    nx: int
    ny: int
    targets: tuple
    G: tuple

    @property
    def M(self) -> int:
        return len(set(self.G))

    def validate(self):
        xs = [x for x, _ in self.targets]
        if len(set(xs)) != len(xs):
            raise RefusalError(
                "targets share an x value; no algorithm is known for that case"
            )
        for g in self.G:
            _check_index("g", g, self.nx)
        if len(set(self.G)) != len(self.G):
            raise ValidationError("G has duplicates")
        for x, y in self.targets:
            _check_index("target x", x, self.nx)
            _check_index("target y", y, self.ny)
            if x not in self.G:
                raise ValidationError(f"target x={x} is not in G")
            if y == 0:
                raise ValidationError("target y = 0 coincides with the y-register start state")
        if not self.targets:
            raise ValidationError("need at least one target")

    def parameters(self):
        return {"nx": self.nx, "ny": self.ny, "targets": sorted(self.targets), "G": sorted(self.G)}


ProblemInstance = (
    Exhaustive | Nearby | SymmetricMulti | MultiTarget | MultiSource | CompositeV | TwoDim
    | Rectangular | MultiDim | TwoDimMultiTarget
)


def nearby_search_space(n: int, k: int):
    """``(C(n, k), (n-k) log(n/(n-k)) + k log(n/k))``."""
    if not 0 < k < n:
        raise ValidationError(f"need 0 < k < n, got k={k}, n={n}")
    if n > 62:
        raise ValidationError(f"n={n} exceeds the supported range (n <= 62)")
    return comb(n, k), (n - k) * math.log(n / (n - k)) + k * math.log(n / k)


def classical_baseline(p) -> int:
    """Worst-case classical query count used for the report ratio.

    Multi-target uses the expected-case ``ceil(N / beta)``; the structured
    two-register problems use the product of the searched ranges.
    """
    if isinstance(p, Exhaustive):
        return 1 << p.n
    if isinstance(p, Nearby):
        return comb(p.n, p.k)
    if isinstance(p, MultiSource):
        return comb(p.n, p.k)
    if isinstance(p, MultiTarget):
        return -(-(1 << p.n) // len(p.T))
    if isinstance(p, SymmetricMulti):
        return -(-(1 << p.U.n_qubits) // len(set(p.T)))
    if isinstance(p, CompositeV):
        return 1 << p.n
    if isinstance(p, Rectangular):
        return (1 << p.ny) * p.M
    if isinstance(p, TwoDim):
        return (1 << p.nx) * p.M
    if isinstance(p, MultiDim):
        total = 1 << p.q
        for j in range(p.d - 1):
            total *= p.fanout(j)
        return total
    if isinstance(p, TwoDimMultiTarget):
        return -(-((1 << p.ny) * p.M) // len(p.targets))
    raise TypeError(f"unknown problem instance {p!r}")
