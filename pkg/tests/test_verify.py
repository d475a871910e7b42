import numpy as np
import pytest

from qsearch.errors import RefusalError
from qsearch.oracle import ORACLE_QUBIT_LIMIT, dense_single, dense_tensor, dense_walsh
from qsearch.statevector import M_GATE
from qsearch.verify import (
    check_dense_guard,
    check_exact_grover,
    check_recurrence,
    flipped_sign_step,
    run_checks,
    summary,
)


def test_all_checks_pass():
    results = run_checks(quick=True)
    assert all(r.passed for r in results), [r for r in results if not r.passed]
    assert summary(results)["passed"]


def test_mutation_caught_by_recurrence_check():
    res = check_recurrence(np.random.default_rng(0), step=flipped_sign_step, trials=3)
    assert not res.passed
    assert res.module == "amp-engine"


def test_exact_grover_check_passes():
    assert check_exact_grover().passed


def test_dense_guard_is_a_pass():
    res = check_dense_guard()
    assert res.passed and "refused" in res.detail


def test_oracle_guard():
    with pytest.raises(RefusalError):
        dense_walsh(ORACLE_QUBIT_LIMIT + 1)


def test_oracle_tensor_matches_walsh():
    np.testing.assert_allclose(dense_tensor(M_GATE.matrix, 3), dense_walsh(3), atol=1e-15)


def test_oracle_single_is_lsb_ordered():
    X = np.array([[0, 1], [1, 0]])
    assert dense_single(X, 0, 2)[1, 0] == 1
    assert dense_single(X, 1, 2)[2, 0] == 1


def test_summary_counts_failures():
    results = run_checks(quick=True, step=flipped_sign_step)
    s = summary(results)
    assert not s["passed"] and s["n_failed"] == 1
