"""Nested searches over several registers.

The outer unitary is a chain of inner amplification stages. Stage ``j``
keeps the earlier coordinates fixed and runs a W-H search over axis ``j``
whose oracle marks the points where the level-``j`` helper is non-zero.
The outer iterate then amplifies the joint target through the whole chain.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from ..engine import AmplificationSpec, analytic_success, coupling_report, iteration_count
from ..program import (
    Negate,
    PhaseInvert,
    Repeat,
    UnitaryProgram,
    WalshHadamard,
    compose,
    count_ops,
)
from ..record import ExperimentRecord
from .drivers import measure
from .instances import MultiDim, Rectangular, TwoDim, TwoDimMultiTarget, classical_baseline


@dataclass(frozen=True)
class Stage:
    """One inner search: axis qubits, marked joint indices, and its iteration count."""

    qubits: tuple
    marked: np.ndarray
    start: np.ndarray
    coupling: float
    eta: int
    program: UnitaryProgram

    @property
    def amplitude(self) -> float:
        """Analytic probability amplitude left on the marked set after the stage."""
        return math.sqrt(analytic_success(self.coupling, self.eta))


def _axis_zero(n_qubits: int, qubits: tuple) -> np.ndarray:
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    mask = 0
    for q in qubits:
        mask |= 1 << q
    return idx[(idx & mask) == 0]


def search_stage(n_qubits: int, qubits: tuple, marked, coupling: float) -> Stage:
    """``Repeat(-I_0 W I_marked W, eta)`` then ``W``, with W on ``qubits`` only.

    ``eta`` is the floor/ceil candidate with the better 2x2-predicted success,
    the same rule the outer loop uses.
    """
    marked = np.asarray(marked, dtype=np.int64)
    start = _axis_zero(n_qubits, qubits)
    eta = iteration_count(coupling).best_eta
    wh = WalshHadamard(tuple(qubits))
    body = UnitaryProgram(n_qubits, [wh, PhaseInvert(marked), wh, PhaseInvert(start), Negate()])
    prims = [Repeat(body, eta)] if eta else []
    prims.append(wh)
    return Stage(tuple(qubits), marked, start, coupling, eta, UnitaryProgram(n_qubits, prims))


def _joint_indices(n_qubits: int, low_bits: int, allowed) -> np.ndarray:
    """All joint indices whose low ``low_bits`` bits are one of ``allowed``."""
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    low = idx & ((1 << low_bits) - 1)
    return idx[np.isin(low, np.asarray(sorted(allowed), dtype=np.int64))]


def two_register_stages(nx: int, ny: int, G, target_points) -> list:
    """x-stage over ``G`` then y-stage marking the joint ``target_points``."""
    n = nx + ny
    x_qubits = tuple(range(nx))
    y_qubits = tuple(range(nx, n))
    M = len(set(G))
    x_stage = search_stage(n, x_qubits, _joint_indices(n, nx, G), math.sqrt(M / (1 << nx)))
    y_marked = np.asarray(sorted(x | (y << nx) for x, y in target_points), dtype=np.int64)
    y_stage = search_stage(n, y_qubits, y_marked, 1.0 / math.sqrt(1 << ny))
    return [x_stage, y_stage]


def two_register_program(nx: int, ny: int, G, target_points) -> UnitaryProgram:
    stages = two_register_stages(nx, ny, G, target_points)
    return compose(*(st.program for st in stages))


def _outer(spec, predicted, **kw) -> ExperimentRecord:
    measured = coupling_report(spec, check_pairs=False).effective
    return measure(spec, predicted, coupling_measured=measured, **kw)


def _outer_spec(stages, targets):
    return AmplificationSpec(compose(*(st.program for st in stages)), [0], targets)


def two_dim_spec(p: TwoDim):
    """Outer spec and predicted coupling ``(x amplitude / sqrt(M)) * y amplitude``."""
    x_stage, y_stage = stages = two_register_stages(p.nx, p.ny, p.G, [(p.t1, p.t2)])
    predicted = x_stage.amplitude / math.sqrt(p.M) * y_stage.amplitude
    return _outer_spec(stages, [p.t1 | (p.t2 << p.nx)]), predicted


def solve_two_dim(p: TwoDim) -> ExperimentRecord:
    started = time.perf_counter()
    p.validate()
    spec, predicted = two_dim_spec(p)
    N1, N2 = 1 << p.nx, 1 << p.ny
    rect = isinstance(p, Rectangular)
    return _outer(
        spec,
        predicted,
        problem_id="rectangular" if rect else "two_dim",
        parameters=p.parameters(),
        formula_name="sqrt(N1)+sqrt(N2*M)" if rect else "sqrt(N*M)",
        step_bound=(math.sqrt(N1) + math.sqrt(N2 * p.M)) if rect else math.sqrt(N1 * p.M),
        baseline=classical_baseline(p),
        started=started,
    )


def two_dim_multi_target_spec(p: TwoDimMultiTarget):
    x_stage, y_stage = stages = two_register_stages(p.nx, p.ny, p.G, p.targets)
    predicted = math.sqrt(len(p.targets) / p.M) * x_stage.amplitude * y_stage.amplitude
    return _outer_spec(stages, [x | (y << p.nx) for x, y in p.targets]), predicted


def solve_two_dim_multi_target(p: TwoDimMultiTarget) -> ExperimentRecord:
    started = time.perf_counter()
    p.validate()
    spec, predicted = two_dim_multi_target_spec(p)
    N, beta = 1 << p.ny, len(p.targets)
    return _outer(
        spec,
        predicted,
        problem_id="two_dim_multi",
        parameters=p.parameters(),
        formula_name="sqrt(N*M/beta)",
        step_bound=math.sqrt(N * p.M / beta),
        baseline=classical_baseline(p),
        started=started,
    )


def multi_dim_stages(p: MultiDim) -> list:
    n = p.n_qubits
    stages = []
    for j in range(p.d):
        qubits = tuple(range(j * p.q, (j + 1) * p.q))
        if j < p.d - 1:
            marked = _joint_indices(n, (j + 1) * p.q, set(p.levels[j]))
            m = p.fanout(j)
        else:
            marked = np.array([p.prefix(p.d)], dtype=np.int64)
            m = 1
        stages.append(search_stage(n, qubits, marked, math.sqrt(m / (1 << p.q))))
    return stages


def multi_dim_spec(p: MultiDim):
    stages = multi_dim_stages(p)
    predicted = 1.0
    for j, st in enumerate(stages):
        m = p.fanout(j) if j < p.d - 1 else 1
        predicted *= st.amplitude / math.sqrt(m)
    return _outer_spec(stages, [p.prefix(p.d)]), predicted


def solve_multi_dim(p: MultiDim) -> ExperimentRecord:
    started = time.perf_counter()
    p.validate()
    spec, predicted = multi_dim_spec(p)
    product_m = math.prod(p.fanout(j) for j in range(p.d - 1))
    return _outer(
        spec,
        predicted,
        problem_id="multi_dim",
        parameters=p.parameters(),
        formula_name="sqrt(N*M1*...*M_{d-1})",
        step_bound=math.sqrt((1 << p.q) * product_m),
        baseline=classical_baseline(p),
        started=started,
    )


def solve_two_dim_variants(p) -> ExperimentRecord:
    if isinstance(p, TwoDimMultiTarget):
        return solve_two_dim_multi_target(p)
    if isinstance(p, MultiDim):
        return solve_multi_dim(p)
    if isinstance(p, TwoDim):
        return solve_two_dim(p)
    raise TypeError(f"not a two-dimensional variant: {p!r}")


def stage_ops(stages) -> int:
    return sum(count_ops(st.program) for st in stages)
