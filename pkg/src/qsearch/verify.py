"""Self-check suite behind the ``verify`` subcommand.

Each check returns a :class:`CheckResult`; nothing here raises on a failed
invariant. A dense-oracle refusal counts as the expected outcome of the
guard check, not as a failure.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .engine import (
    AmplificationSpec,
    TwoDimState,
    analytic_success,
    build_Q,
    run_amplification,
    subspace_trace,
    two_dim_step,
)
from .errors import RefusalError
from .oracle import dense_phase, dense_Q, dense_single, dense_tensor, dense_walsh
from .problems import inversion_about_average_check, walsh_program
from .program import (
    DENSE_QUBIT_LIMIT,
    OneQubit,
    PhaseInvert,
    UnitaryProgram,
    WalshHadamard,
    apply_program,
    compose,
    gate_on_all,
    invert_program,
    to_dense_matrix,
)
from .randprog import random_gate, random_program, random_state
from .statevector import basis_state, rotation_gate

SEED = 20240611


@dataclass(frozen=True)
class CheckResult:
    module: str
    invariant: str
    passed: bool
    detail: str

    def as_dict(self):
        return asdict(self)


def _result(module, invariant, err, tol):
    return CheckResult(module, invariant, err <= tol, f"max error {err:.3e} (tol {tol:g})")


def _columns_error(p: UnitaryProgram, dense: np.ndarray) -> float:
    """Max deviation between ``p`` applied to every basis state and ``dense``."""
    n = p.n_qubits
    err = 0.0
    for i in range(1 << n):
        col = apply_program(basis_state(n, i), p).amps
        err = max(err, float(np.max(np.abs(col - dense[:, i]))))
    return err


def check_walsh_law(max_n: int = 6) -> CheckResult:
    err = 0.0
    for n in range(1, max_n + 1):
        err = max(err, _columns_error(walsh_program(n), dense_walsh(n)))
    return _result("statevector-core", "walsh-hadamard entries 2^(-n/2)(-1)^(x.y)", err, 1e-12)


def check_norm(rng, length: int = 1000, trials: int = 3, n: int = 6) -> CheckResult:
    err = 0.0
    for _ in range(trials):
        p = random_program(n, length, rng)
        sv = random_state(n, rng)
        err = max(err, abs(apply_program(sv, p).norm() - 1.0))
    return _result("unitary-program", f"norm preserved over {length}-primitive programs", err, 1e-9)


def check_brute_force(rng, max_n: int = 4) -> CheckResult:
    """W, I_S, rotation tensors, single gates and Q against dense matrices on every basis state."""
    err = 0.0
    for n in range(1, max_n + 1):
        N = 1 << n
        err = max(err, _columns_error(walsh_program(n), dense_walsh(n)))
        S = sorted(rng.choice(N, size=max(1, N // 3), replace=False).tolist())
        err = max(err, _columns_error(UnitaryProgram(n, [PhaseInvert(S)]), dense_phase(n, S)))
        if n > 1:
            for k in range(1, n):
                g = rotation_gate(k, n)
                err = max(err, _columns_error(gate_on_all(g, n), dense_tensor(g.matrix, n)))
        g = random_gate(rng)
        q = int(rng.integers(n))
        err = max(err, _columns_error(UnitaryProgram(n, [OneQubit(g, q)]), dense_single(g.matrix, q, n)))
        if N >= 2:
            s, t = (int(v) for v in rng.choice(N, size=2, replace=False))
            U = random_program(n, 12, rng)
            spec = AmplificationSpec(U, [s], [t])
            err = max(err, _columns_error(build_Q(spec), dense_Q(to_dense_matrix(U), [s], [t])))
    return _result("unitary-program", "dense brute-force equivalence (n <= 4)", err, 1e-10)


def check_adjoint(rng, trials: int = 10, n: int = 4) -> CheckResult:
    """``<a|U b> == <U^-1 a|b>`` and the dense inverse is the conjugate transpose."""
    err = 0.0
    for _ in range(trials):
        U = random_program(n, 30, rng)
        d = to_dense_matrix(U)
        di = to_dense_matrix(invert_program(U))
        err = max(err, float(np.max(np.abs(di - d.conj().T))))
    return _result("unitary-program", "inverse equals adjoint", err, 1e-10)


def check_round_trip(rng, trials: int = 10, n: int = 6) -> CheckResult:
    err = 0.0
    for _ in range(trials):
        U = random_program(n, 100, rng)
        sv = random_state(n, rng)
        back = apply_program(sv, compose(U, invert_program(U)))
        err = max(err, float(np.max(np.abs(back.amps - sv.amps))))
    return _result("unitary-program", "invert-compose round trip", err, 1e-9)


def check_recurrence(rng, step=two_dim_step, trials: int = 20, n: int = 6, length: int = 50,
                     steps: int = 40) -> CheckResult:
    """Iterates stay in the two-dimensional span and follow ``step`` there."""
    coord_err = 0.0
    resid = 0.0
    for _ in range(trials):
        U = random_program(n, length, rng)
        s, t = (int(v) for v in rng.choice(1 << n, size=2, replace=False))
        for coords, r, pred in subspace_trace(AmplificationSpec(U, [s], [t]), steps, step):
            resid = max(resid, r)
            coord_err = max(coord_err, abs(coords.a_s - pred.a_s), abs(coords.a_t - pred.a_t))
    tol = 1e-9
    ok = coord_err <= tol and resid <= tol
    return CheckResult(
        "amp-engine",
        "two-dimensional recurrence",
        ok,
        f"coordinate error {coord_err:.3e}, residual {resid:.3e} (tol {tol:g})",
    )


def check_exact_grover(step=two_dim_step) -> CheckResult:
    spec = AmplificationSpec(walsh_program(2), [0], [3])
    _, success = run_amplification(spec, 1)
    st = step(TwoDimState(1.0 + 0j, 0j), 0.5)
    predicted = abs(st.a_s * 0.5 + st.a_t) ** 2
    err = max(abs(success - 1.0), abs(predicted - 1.0))
    return _result("amp-engine", "N=4 search succeeds in one iteration", err, 1e-12)


def check_analytic_n10() -> CheckResult:
    spec = AmplificationSpec(walsh_program(10), [0], [777])
    _, success = run_amplification(spec, 25)
    err = abs(success - analytic_success(2.0 ** -5, 25))
    return _result("amp-engine", "n=10 success matches the 2x2 oracle", err, 1e-9)


def check_inversion_about_average(rng, trials: int = 100) -> CheckResult:
    failures = 0
    for i in range(trials):
        n = 2 + i % 7
        try:
            inversion_about_average_check(random_state(n, rng, real=True), atol=1e-10)
        except AssertionError:
            failures += 1
    return CheckResult(
        "problems", "inversion about average", failures == 0, f"{failures}/{trials} vectors failed"
    )


def check_dense_guard() -> CheckResult:
    n = DENSE_QUBIT_LIMIT + 1
    try:
        to_dense_matrix(UnitaryProgram(n, [WalshHadamard()]))
    except RefusalError as exc:
        return CheckResult("unitary-program", "dense oracle guard refuses", True, str(exc))
    return CheckResult("unitary-program", "dense oracle guard refuses", False, f"n={n} was not refused")


def run_checks(step=two_dim_step, quick: bool = False, seed: int = SEED) -> list:
    """Run every invariant; ``step`` can be swapped to confirm the recurrence check bites."""
    rng = np.random.default_rng(seed)
    trials = 4 if quick else 20
    return [
        check_walsh_law(),
        check_norm(rng),
        check_brute_force(rng),
        check_adjoint(rng),
        check_round_trip(rng),
        check_recurrence(rng, step=step, trials=trials),
        check_exact_grover(step=step),
        check_analytic_n10(),
        check_inversion_about_average(rng),
        check_dense_guard(),
    ]


def summary(results) -> dict:
    failed = [r for r in results if not r.passed]
    return {
        "passed": not failed,
        "n_checks": len(results),
        "n_failed": len(failed),
        "checks": [r.as_dict() for r in results],
    }


def flipped_sign_step(st, uts):
    """Deliberately wrong recurrence (sign of the coupling term flipped)."""
    u = complex(uts)
    a_s = (1.0 - 4.0 * abs(u) ** 2) * st.a_s + 2.0 * u.conjugate() * st.a_t
    a_t = 2.0 * u * st.a_s + st.a_t
    return TwoDimState(a_s, a_t)

