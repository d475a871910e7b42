"""Generalised amplitude amplification with an arbitrary unitary program.

The iterate is ``Q = -I_S U^-1 I_T U``. Started on the prepared source
``|sigma>`` it never leaves ``span{|sigma>, U^-1 |tau>}`` (``|tau>`` is the
normalised projection of ``U|sigma>`` onto the targets), and inside that plane
it is the 2x2 map implemented by :func:`two_dim_step`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ArgumentError,
    DegenerateSpecError,
    NoCouplingError,
    UnsupportedCardinalityError,
    ValidationError,
)
from .program import (
    Negate,
    PhaseInvert,
    Repeat,
    UnitaryProgram,
    WalshHadamard,
    apply_program,
    compose,
    count_ops,
    invert_program,
    permutation_from_partial,
)
from .statevector import (
    StateVector,
    basis_set,
    basis_state,
    inner_product,
    probability_of,
)

log = logging.getLogger(__name__)

COUPLING_FLOOR = 1e-12
SYMMETRY_TOL = 1e-9


def prepare_uniform_source(S, n: int) -> UnitaryProgram:
    """Program taking ``|0...0>`` to the equal superposition over ``S``.

    W-H on the low ``a`` qubits (``|S| = 2**a``) followed by a basis
    permutation ``j -> S[j]``.
    """
    S = basis_set(S, n)
    alpha = int(S.size)
    if alpha == 0 or alpha & (alpha - 1):
        raise UnsupportedCardinalityError(f"|S| = {alpha} is not a power of two")
    a = alpha.bit_length() - 1
    prims = []
    if a:
        prims.append(WalshHadamard(tuple(range(a))))
    mapping = {j: int(s) for j, s in enumerate(S) if j != s}
    if mapping:
        prims.append(permutation_from_partial(mapping, n))
    return UnitaryProgram(n, prims)


@dataclass(frozen=True)
class AmplificationSpec:
    U: UnitaryProgram
    S: np.ndarray
    T: np.ndarray
    allow_overlap: bool = False
    prepare: UnitaryProgram = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = self.U.n_qubits
        S = basis_set(self.S, n)
        T = basis_set(self.T, n)
        if S.size == 0 or T.size == 0:
            raise ValidationError("source and target sets must be non-empty")
        if not self.allow_overlap and np.intersect1d(S, T).size:
            raise DegenerateSpecError(
                f"source and target sets overlap at {np.intersect1d(S, T).tolist()}"
            )
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "prepare", prepare_uniform_source(S, n))

    @property
    def n_qubits(self) -> int:
        return self.U.n_qubits

    @property
    def alpha(self) -> int:
        return int(self.S.size)

    @property
    def beta(self) -> int:
        return int(self.T.size)

    def source_state(self) -> StateVector:
        return apply_program(basis_state(self.n_qubits, 0), self.prepare)


@dataclass(frozen=True)
class TwoDimState:
    """Coordinates on ``|sigma>`` and ``U^-1|tau>`` (not orthogonal in general)."""

    a_s: complex
    a_t: complex


@dataclass(frozen=True)
class IterationPlan:
    uts_mag: float
    eta: int
    eta_floor: int
    eta_ceil: int

    @property
    def candidates(self) -> tuple:
        c = {self.eta, self.eta_floor, self.eta_ceil}
        if self.uts_mag > 0.5:
            c |= {0, 1}
        return tuple(sorted(c))

    def analytic_success(self, eta: int) -> float:
        return analytic_success(self.uts_mag, eta)

    @property
    def best_eta(self) -> int:
        """Candidate with the highest 2x2-predicted success (ties go to fewer iterations)."""
        scores = [(self.analytic_success(e), -e) for e in self.candidates]
        return -max(scores)[1]


def build_Q(spec: AmplificationSpec) -> UnitaryProgram:
    """``-I_S U^-1 I_T U`` as a flat program (``U`` applied first)."""
    n = spec.n_qubits
    return compose(
        spec.U,
        UnitaryProgram(n, [PhaseInvert(spec.T)]),
        invert_program(spec.U),
        UnitaryProgram(n, [PhaseInvert(spec.S), Negate()]),
    )


def two_dim_step(st: TwoDimState, uts: complex) -> TwoDimState:
    u = complex(uts)
    a_s = (1.0 - 4.0 * abs(u) ** 2) * st.a_s - 2.0 * u.conjugate() * st.a_t
    a_t = 2.0 * u * st.a_s + st.a_t
    return TwoDimState(a_s, a_t)


def two_dim_trajectory(uts: complex, steps: int, step=None) -> list:
    """States after 0..steps iterations, starting from ``(1, 0)``."""
    step = step or two_dim_step
    st = TwoDimState(1.0 + 0j, 0j)
    out = [st]
    for _ in range(steps):
        st = step(st, uts)
        out.append(st)
    return out


def analytic_success(uts: complex, eta: int) -> float:
    """Target probability after ``eta`` iterations and one final ``U``.

    After ``U`` the target amplitude is ``a_s * u + a_t`` (``|tau>`` picks up
    ``u`` from ``|sigma>`` and all of ``U^-1|tau>``).
    """
    st = two_dim_trajectory(uts, eta)[-1]
    return abs(st.a_s * complex(uts) + st.a_t) ** 2


def _nearest(x: float) -> int:
    return int(math.floor(x + 0.5))


def iteration_count(uts_mag: float) -> IterationPlan:
    if uts_mag <= 0.0:
        raise NoCouplingError("coupling is zero; the target is unreachable through U")
    if uts_mag > 1.0 + 1e-12 or not math.isfinite(uts_mag):
        raise ArgumentError(f"coupling magnitude must lie in (0, 1], got {uts_mag}")
    uts_mag = min(uts_mag, 1.0)
    x = math.pi / (4.0 * uts_mag)
    return IterationPlan(uts_mag, _nearest(x), math.floor(x), math.ceil(x))


@dataclass(frozen=True)
class CouplingReport:
    effective: float
    pairwise: np.ndarray  # |T| x |S| complex, U_ts for each pair
    symmetric: bool
    spread: float


def coupling_report(spec: AmplificationSpec, check_pairs: bool = True) -> CouplingReport:
    out = apply_program(spec.source_state(), spec.U)
    eff = math.sqrt(probability_of(out, spec.T))
    if eff < COUPLING_FLOOR:
        raise NoCouplingError(f"effective coupling {eff:.3e} is below {COUPLING_FLOOR}")
    if check_pairs:
        cols = [apply_program(basis_state(spec.n_qubits, int(s)), spec.U).amps[spec.T] for s in spec.S]
        pairwise = np.stack(cols, axis=1)
        mags = np.abs(pairwise)
        spread = float(mags.max() - mags.min())
    else:
        pairwise = np.empty((0, 0), dtype=complex)
        spread = 0.0
    return CouplingReport(eff, pairwise, spread <= SYMMETRY_TOL, spread)


def effective_coupling(spec: AmplificationSpec) -> float:
    """``sqrt(P_T(U |sigma>))``: the coupling that drives the iterate.

    Pairwise ``|U_ts|`` over ``S x T`` are compared as well; a spread above
    ``SYMMETRY_TOL`` is logged since the symmetric analysis then no longer
    guarantees the success probability.
    """
    report = coupling_report(spec)
    if not report.symmetric:
        log.warning("asymmetric couplings: pairwise |U_ts| spread %.3e", report.spread)
    return report.effective


def amplification_program(spec: AmplificationSpec, eta: int) -> UnitaryProgram:
    """prepare-source, ``Q**eta``, then ``U``."""
    n = spec.n_qubits
    return compose(spec.prepare, UnitaryProgram(n, [Repeat(build_Q(spec), eta)]), spec.U)


def run_amplification(spec: AmplificationSpec, plan: IterationPlan | int):
    """Returns ``(final_state, success)`` with success the probability on ``T``."""
    eta = plan if isinstance(plan, int) else plan.eta
    if eta < 0:
        raise ArgumentError(f"eta must be >= 0, got {eta}")
    final = apply_program(basis_state(spec.n_qubits, 0), amplification_program(spec, eta))
    return final, probability_of(final, spec.T)


def sweep_success(spec: AmplificationSpec, etas: Iterable[int]) -> dict:
    """Measured success for each eta, walking the iterate incrementally."""
    etas = sorted(set(int(e) for e in etas))
    if etas and etas[0] < 0:
        raise ArgumentError("eta must be >= 0")
    Q = build_Q(spec)
    state = spec.source_state()
    done = 0
    out = {}
    for eta in etas:
        if eta > done:
            state = apply_program(state, UnitaryProgram(spec.n_qubits, [Repeat(Q, eta - done)]))
            done = eta
        out[eta] = probability_of(apply_program(state, spec.U), spec.T)
    return out


def ops_for(spec: AmplificationSpec, eta: int) -> int:
    return count_ops(amplification_program(spec, eta))


# -- subspace view --------------------------------------------------------------

def subspace_vectors(spec: AmplificationSpec):
    """``(|sigma>, U^-1|tau>, u)`` with ``u = <tau|U|sigma>``.

    With a single target ``|tau>`` is the basis vector itself, so ``u`` is the
    complex ``U_ts``; otherwise ``|tau>`` is normalised and ``u`` is real.
    """
    sigma = spec.source_state()
    image = apply_program(sigma, spec.U)
    n = spec.n_qubits
    if spec.beta == 1:
        t = int(spec.T[0])
        tau = basis_state(n, t)
        u = complex(image.amps[t])
    else:
        amps = np.zeros_like(image.amps)
        amps[spec.T] = image.amps[spec.T]
        u = math.sqrt(probability_of(image, spec.T))
        if u < COUPLING_FLOOR:
            raise NoCouplingError("effective coupling is zero")
        tau = StateVector(n, amps / u)
        u = complex(u)
    return sigma, apply_program(tau, invert_program(spec.U)), u


def project_two_dim(psi: StateVector, e1: StateVector, e2: StateVector):
    """Least-squares coordinates of ``psi`` on ``(e1, e2)`` and the residual norm."""
    g = np.array([[inner_product(e1, e1), inner_product(e1, e2)],
                  [inner_product(e2, e1), inner_product(e2, e2)]])
    rhs = np.array([inner_product(e1, psi), inner_product(e2, psi)])
    c = np.linalg.solve(g, rhs)
    resid = psi.amps - c[0] * e1.amps - c[1] * e2.amps
    return TwoDimState(complex(c[0]), complex(c[1])), float(np.linalg.norm(resid))


def subspace_trace(spec: AmplificationSpec, steps: int, step=None):
    """Per step: (projected coordinates, residual, recurrence prediction)."""
    e1, e2, u = subspace_vectors(spec)
    Q = build_Q(spec)
    predicted = two_dim_trajectory(u, steps, step)
    state = e1
    rows = []
    for j in range(steps + 1):
        if j:
            state = apply_program(state, Q)
        coords, resid = project_two_dim(state, e1, e2)
        rows.append((coords, resid, predicted[j]))
    return rows


def best_of(successes: dict) -> tuple:
    """``(eta, success)`` with the highest success; ties go to the smaller eta."""
    eta = max(successes, key=lambda e: (successes[e], -e))
    return eta, successes[eta]


def candidate_etas(plan: IterationPlan, extra: Sequence[int] = ()) -> list:
    return sorted(set(plan.candidates) | set(extra))
