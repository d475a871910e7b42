"""Line-oriented text form of a UnitaryProgram, for debugging and golden files.

Grammar (one primitive per line, two-space indent inside ``repeat``)::

    program <n_qubits>
    wh all | wh <q>,<q>,...
    onequbit <qubit> <name|-> <re00> <im00> <re01> <im01> <re10> <im10> <re11> <im11>
    phase <ranges>            # e.g. 0-3,8,12-15 ; "-" for the empty set
    negate
    perm <p0>,<p1>,...
    repeat <count>
      <body lines>
    end

Floats are written with ``repr`` so a dump/parse round trip is exact.
"""

from __future__ import annotations

import numpy as np

from .errors import ArgumentError
from .program import (
    BasisPermutation,
    Negate,
    OneQubit,
    PhaseInvert,
    Repeat,
    UnitaryProgram,
    WalshHadamard,
)
from .statevector import OneQubitUnitary


def _ranges(indices) -> str:
    idx = [int(i) for i in indices]
    if not idx:
        return "-"
    parts = []
    start = prev = idx[0]
    for i in idx[1:] + [None]:
        if i is not None and i == prev + 1:
            prev = i
            continue
        parts.append(str(start) if start == prev else f"{start}-{prev}")
        if i is not None:
            start = prev = i
    return ",".join(parts)


def _parse_ranges(text: str) -> list:
    if text == "-":
        return []
    out = []
    for part in text.split(","):
        if "-" in part:
            a, b = part.split("-")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _dump_lines(prims, depth):
    pad = "  " * depth
    for prim in prims:
        if isinstance(prim, WalshHadamard):
            arg = "all" if prim.qubits is None else ",".join(map(str, prim.qubits))
            yield f"{pad}wh {arg}"
        elif isinstance(prim, OneQubit):
            nums = []
            for z in prim.gate.matrix.ravel():
                nums += [repr(float(z.real)), repr(float(z.imag))]
            name = prim.gate.name or "-"
            yield f"{pad}onequbit {prim.qubit} {name} {' '.join(nums)}"
        elif isinstance(prim, PhaseInvert):
            yield f"{pad}phase {_ranges(prim.indices)}"
        elif isinstance(prim, Negate):
            yield f"{pad}negate"
        elif isinstance(prim, BasisPermutation):
            yield f"{pad}perm {','.join(str(int(v)) for v in prim.perm)}"
        elif isinstance(prim, Repeat):
            yield f"{pad}repeat {prim.count}"
            yield from _dump_lines(prim.body.primitives, depth + 1)
            yield f"{pad}end"
        else:
            raise ArgumentError(f"cannot dump {prim!r}")


def dump_program(p: UnitaryProgram) -> str:
    lines = [f"program {p.n_qubits}"]
    lines.extend(_dump_lines(p.primitives, 1))
    return "\n".join(lines) + "\n"


def parse_program(text: str) -> UnitaryProgram:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("program "):
        raise ArgumentError("program dump must start with 'program <n_qubits>'")
    n = int(lines[0].split()[1])
    prims, pos = _parse_block(lines, 1, n)
    if pos != len(lines):
        raise ArgumentError(f"unexpected line {pos + 1}: {lines[pos]!r}")
    return UnitaryProgram(n, prims)


def _parse_block(lines, pos, n):
    prims = []
    while pos < len(lines):
        head, _, rest = lines[pos].partition(" ")
        if head == "end":
            return prims, pos
        if head == "wh":
            prims.append(WalshHadamard(None if rest == "all" else tuple(int(q) for q in rest.split(","))))
        elif head == "onequbit":
            fields = rest.split()
            q, name, vals = int(fields[0]), fields[1], [float(v) for v in fields[2:]]
            if len(vals) != 8:
                raise ArgumentError(f"onequbit needs 8 numbers, got {len(vals)}")
            m = np.array(vals[0::2]) + 1j * np.array(vals[1::2])
            gate = OneQubitUnitary(m.reshape(2, 2), name=None if name == "-" else name)
            prims.append(OneQubit(gate, q))
        elif head == "phase":
            prims.append(PhaseInvert(_parse_ranges(rest.strip())))
        elif head == "negate":
            prims.append(Negate())
        elif head == "perm":
            prims.append(BasisPermutation([int(v) for v in rest.split(",")]))
        elif head == "repeat":
            body, end = _parse_block(lines, pos + 1, n)
            if end >= len(lines):
                raise ArgumentError("repeat block without 'end'")
            prims.append(Repeat(UnitaryProgram(n, body), int(rest)))
            pos = end
        else:
            raise ArgumentError(f"unknown primitive keyword {head!r}")
        pos += 1
    return prims, pos
