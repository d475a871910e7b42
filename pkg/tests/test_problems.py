import math
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsearch.engine import effective_coupling
from qsearch.errors import (
    AsymmetricCouplingError,
    DegenerateSpecError,
    DestructiveInterferenceError,
    RefusalError,
    ValidationError,
)
from qsearch.oracle import dense_phase, dense_walsh
from qsearch.problems import (
    CompositeV,
    Exhaustive,
    MultiDim,
    MultiSource,
    MultiTarget,
    Nearby,
    Rectangular,
    SymmetricMulti,
    TwoDim,
    TwoDimMultiTarget,
    build_spec,
    classical_baseline,
    composite_amplitude,
    composite_program,
    inversion_about_average_check,
    multi_dim_stages,
    nearby_coupling,
    nearby_search_space,
    rotation_program,
    solve,
    solve_nearby_at_most,
    two_register_stages,
    walsh_program,
)
from qsearch.program import amplitude_between
from qsearch.randprog import random_program, random_state
from qsearch.statevector import StateVector, basis_state, uniform_state

MULTIDIM = MultiDim(
    d=3, q=4,
    levels=((3, 7), (3 | 5 << 4, 3 | 9 << 4, 7 | 1 << 4, 7 | 2 << 4)),
    target=(3, 5, 11),
)

# Desk-scale instances, one per family.
INSTANCES = [
    Exhaustive(8, 200),
    Nearby(10, 2, 0b1100, 0b0110),
    SymmetricMulti(walsh_program(8), (0, 1), (128, 144)),
    MultiTarget(8, (3, 50, 77, 201)),
    MultiSource(12, 2, (3, 5, 6, 9), 0),
    CompositeV(8, (2, 4, 6, 8), 1, walsh_program(8)),
    TwoDim(4, 4, (1, 2, 3, 5), 5, 9),
    Rectangular(4, 6, (1, 2, 3, 5), 5, 40),
    MULTIDIM,
    TwoDimMultiTarget(5, 5, ((1, 7), (2, 20)), (1, 2, 3, 4, 5, 6, 7, 9)),
]


@pytest.mark.parametrize("p", INSTANCES, ids=lambda p: type(p).__name__)
def test_predicted_coupling_matches_measured(p):
    spec, predicted = build_spec(p)
    assert effective_coupling(spec) == pytest.approx(predicted, abs=1e-9)


@pytest.mark.parametrize("p", INSTANCES, ids=lambda p: type(p).__name__)
def test_success_at_best(p):
    rec = solve(p)
    assert 0.0 <= rec.success_at_predicted <= 1.0 + 1e-12
    assert rec.success_at_best >= 0.95
    if rec.coupling_predicted <= 1 / 16:
        assert rec.success_at_best >= 0.999
    assert abs(rec.coupling_measured - rec.coupling_predicted) <= 1e-9


def test_exhaustive_small_and_n10():
    rec = solve(Exhaustive(2, 3))
    assert rec.eta_predicted == 1 and rec.success_at_predicted == pytest.approx(1.0, abs=1e-12)
    rec = solve(Exhaustive(10, 777))
    assert rec.eta_predicted == 25 and rec.success_at_best >= 0.999


def test_exhaustive_s_equals_t_rejected():
    with pytest.raises(DegenerateSpecError):
        solve(Exhaustive(4, 5, s=5))


def test_inversion_about_average_uniform_fixed():
    u = StateVector(3, uniform_state(3).amps.real)
    np.testing.assert_allclose(inversion_about_average_check(u).amps, u.amps, atol=1e-12)


@pytest.mark.parametrize("n,i", [(3, 0), (4, 9)])
def test_inversion_about_average_basis(n, i):
    N = 1 << n
    out = inversion_about_average_check(basis_state(n, i)).amps.real
    expected = np.full(N, 2 / N)
    expected[i] = 2 / N - 1
    np.testing.assert_allclose(out, expected, atol=1e-12)


def test_inversion_about_average_matches_dense(rng):
    x = random_state(6, rng, real=True)
    W = dense_walsh(6)
    zero_flip = dense_phase(6, [0])
    dense = -W @ zero_flip @ W @ x.amps
    np.testing.assert_allclose(inversion_about_average_check(x).amps, dense, atol=1e-10)


def test_inversion_about_average_rejects_complex():
    with pytest.raises(ValueError):
        inversion_about_average_check(StateVector(1, [1j, 0]))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1))
def test_inversion_about_average_property(n, seed):
    inversion_about_average_check(random_state(n, np.random.default_rng(seed), real=True), atol=1e-10)


def test_nearby_n8_k1():
    expected = (7 / 8) ** 3.5 * (1 / 8) ** 0.5
    assert abs(amplitude_between(rotation_program(8, 1), 0, 16)) == pytest.approx(expected, rel=1e-12)
    assert nearby_coupling(8, 1) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [4, 8, 12])
def test_nearby_half_reduces_to_exhaustive(n):
    k = n // 2
    t = (1 << k) - 1
    assert abs(amplitude_between(rotation_program(n, k), 0, t)) == pytest.approx(2 ** (-n / 2), rel=1e-12)


def test_nearby_n12_k2():
    rec = solve(Nearby(12, 2, 0, 0b101000))
    assert rec.success_at_best >= 0.99


def test_nearby_hamming_mismatch():
    with pytest.raises(ValidationError):
        solve(Nearby(8, 2, 0, 7))


def test_nearby_at_most_runs_each_distance():
    recs = solve_nearby_at_most(10, 3, 0, 0b11)
    assert [r.parameters.split(";")[0] for r in recs] == ["j=3", "j=2", "j=1"]
    for r in recs:
        assert r.coupling_measured == pytest.approx(r.coupling_predicted, abs=1e-12)
    assert max(r.success_at_best for r in recs) >= 0.99


def test_nearby_at_most_rejects_far_target():
    with pytest.raises(ValidationError):
        solve_nearby_at_most(10, 1, 0, 0b11)


def test_search_space_examples():
    assert nearby_search_space(16, 3)[0] == 560
    with pytest.raises(ValidationError):
        nearby_search_space(63, 3)


@pytest.mark.parametrize("n", range(2, 33))
def test_stirling_log_bounds(n):
    for k in range(1, n):
        size, log_form = nearby_search_space(n, k)
        assert math.log(size) <= log_form <= math.log(size) + math.log(n) + 1


@pytest.mark.parametrize("n", range(2, 25))
def test_solution_space_ratio(n):
    for k in range(1, n):
        ratio = comb(n, k) * nearby_coupling(n, k) ** 2
        assert 0.01 < ratio <= 1


def test_multi_target_example():
    rec = solve(MultiTarget(10, (1, 100, 500, 1000)))
    assert rec.eta_predicted in (12, 13)
    assert rec.success_at_best >= 0.99


def test_multi_target_single_equals_exhaustive():
    a = solve(MultiTarget(8, (77,)))
    b = solve(Exhaustive(8, 77))
    for col in ("coupling_measured", "eta_predicted", "success_at_predicted", "success_at_best", "primitive_ops"):
        assert getattr(a, col) == getattr(b, col)


def test_multi_target_quarter_is_exact():
    rec = solve(MultiTarget(4, (1, 2, 3, 4)))
    assert rec.eta_predicted == 1
    assert rec.success_at_predicted == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("T", [(), tuple(range(1, 6)), (3, 3)])
def test_multi_target_beta_guard(T):
    with pytest.raises(ValidationError):
        solve(MultiTarget(4, T))


def test_multi_source_single_is_nearby():
    a = solve(MultiSource(12, 2, (3,), 0))
    b = solve(Nearby(12, 2, 3, 0))
    assert a.eta_predicted == b.eta_predicted
    assert a.success_at_best == b.success_at_best


def test_multi_source_halves_eta():
    a4 = solve(MultiSource(12, 2, (3, 5, 6, 9), 0))
    a1 = solve(Nearby(12, 2, 3, 0))
    assert abs(a4.eta_best - a1.eta_best / 2) <= 1


def test_multi_source_mixed_sign():
    # 0 -> 3 flips two bits upward (+), 5 -> 3 flips one each way (-).
    assert amplitude_between(rotation_program(12, 2), 0, 3).real > 0
    assert amplitude_between(rotation_program(12, 2), 5, 3).real < 0
    with pytest.raises(AsymmetricCouplingError):
        solve(MultiSource(12, 2, (0, 5), 3))


def test_multi_source_distance_validated():
    with pytest.raises(ValidationError):
        solve(MultiSource(8, 2, (1, 3), 0))


def test_symmetric_rejects_unequal_magnitudes(rng):
    with pytest.raises(AsymmetricCouplingError):
        solve(SymmetricMulti(random_program(5, 30, rng), (0, 1), (9,)))


def test_symmetric_rejects_phase_mismatch():
    with pytest.raises(AsymmetricCouplingError):
        solve(SymmetricMulti(walsh_program(6), (0, 1), (32, 33)))


def test_composite_amplitude_identity_random(rng):
    U = random_program(6, 30, rng)
    p = CompositeV(6, (5, 17, 30, 44), 11, U)
    direct = sum(amplitude_between(U, s, 11) for s in p.S) / 2
    assert amplitude_between(composite_program(p), 0, 11) == pytest.approx(direct, abs=1e-9)
    assert composite_amplitude(p) == pytest.approx(direct, abs=1e-12)


def test_composite_equal_u():
    # W_{1 s} = +1/64 for every even s, so u = 1/64 and alpha = 4.
    rec = solve(CompositeV(12, (2, 4, 6, 8), 1, walsh_program(12)))
    assert rec.eta_predicted == round(math.pi / (4 * (1 / 64) * 2))
    assert rec.success_at_predicted >= 0.99
    assert rec.success_at_best >= 0.99


def test_composite_destructive_interference():
    with pytest.raises(DestructiveInterferenceError):
        solve(CompositeV(4, (0, 1), 1, walsh_program(4)))


def test_composite_validation():
    with pytest.raises(ValidationError):
        CompositeV(4, (0, 1, 2), 1, walsh_program(4)).validate()
    with pytest.raises(ValidationError):
        CompositeV(4, (1, 2), 0, walsh_program(4)).validate()


def test_two_dim_n64_m4():
    rec = solve(TwoDim(6, 6, (5, 9, 17, 33), 5, 40))
    assert rec.eta_predicted == 1
    assert rec.success_at_predicted >= 0.95
    assert rec.classical_baseline == 256


def test_two_dim_x_stage_amplitudes():
    x_stage, _ = two_register_stages(6, 6, (5, 9, 17, 33), [(5, 40)])
    out = np.zeros(64)
    from qsearch.program import apply_program
    amps = apply_program(basis_state(12, 0), x_stage.program).amps
    for g in (5, 9, 17, 33):
        out[g] = abs(amps[g])
    assert np.all(np.abs(out[[5, 9, 17, 33]] - out[5]) < 1e-12)
    assert out[5] == pytest.approx(x_stage.amplitude / 2, abs=1e-12)


def test_two_dim_full_helper_degenerates_to_walsh():
    x_stage, _ = two_register_stages(3, 3, tuple(range(8)), [(2, 5)])
    assert x_stage.eta == 0
    assert len(x_stage.program) == 1


def test_two_dim_t1_not_in_g():
    with pytest.raises(ValidationError):
        solve(TwoDim(4, 4, (1, 2), 3, 5))


def test_two_dim_op_scaling():
    small = solve(TwoDim(6, 6, (5, 9, 17, 33), 5, 40))
    large = solve(TwoDim(8, 8, (5, 9, 17, 33), 5, 200))
    ratio = large.primitive_ops / small.primitive_ops
    assert 2 / 1.5 <= ratio <= 2 * 1.5


@pytest.mark.parametrize("make", [
    lambda n: Exhaustive(n, 3),
    lambda n: MultiTarget(n, (3, 9, 12, 15)),
])
def test_ops_track_sqrt_baseline(make):
    a, b = solve(make(8)), solve(make(12))
    ra = a.primitive_ops / math.sqrt(a.classical_baseline)
    rb = b.primitive_ops / math.sqrt(b.classical_baseline)
    assert 1 / 1.5 <= rb / ra <= 1.5


def test_rectangular():
    rec = solve(Rectangular(4, 6, (1, 2, 3, 5), 5, 40))
    assert rec.problem_id == "rectangular"
    assert rec.success_at_predicted >= 0.95


def test_multidim():
    rec = solve(MULTIDIM)
    assert rec.success_at_predicted >= 0.9
    assert len(multi_dim_stages(MULTIDIM)) == 3


def test_multidim_guards():
    with pytest.raises(ValidationError):
        MultiDim(3, 5, ((1,), (1,)), (1, 0, 1)).validate()
    with pytest.raises(ValidationError):
        MultiDim(3, 4, ((3, 7), (3 | 5 << 4, 7 | 1 << 4, 7 | 2 << 4)), (3, 5, 11)).validate()


def test_two_dim_multi_target_refuses_shared_x():
    with pytest.raises(RefusalError):
        solve(TwoDimMultiTarget(4, 4, ((1, 3), (1, 5)), (1, 2)))


@pytest.mark.parametrize("p,expected", [
    (Exhaustive(10, 1), 1024),
    (MultiTarget(10, (1, 2, 3, 4)), 256),
    (TwoDim(6, 6, (5, 9, 17, 33), 5, 40), 256),
    (Nearby(12, 2, 0, 3), 66),
    (Rectangular(4, 6, (1, 2, 3, 5), 5, 40), 256),
])
def test_classical_baseline(p, expected):
    assert classical_baseline(p) == expected
