import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsearch.errors import ArgumentError, RefusalError
from qsearch.oracle import dense_phase, dense_walsh
from qsearch.problems import two_register_stages
from qsearch.progtext import dump_program, parse_program
from qsearch.program import (
    DENSE_QUBIT_LIMIT,
    BasisPermutation,
    Negate,
    OneQubit,
    PhaseInvert,
    Repeat,
    UnitaryProgram,
    WalshHadamard,
    amplitude_between,
    apply_program,
    compose,
    count_ops,
    gate_on_all,
    invert_primitive,
    invert_program,
    permutation_from_partial,
    program,
    to_dense_matrix,
)
from qsearch.randprog import random_gate, random_program, random_state
from qsearch.statevector import basis_state, rotation_gate, uniform_state


def test_empty_program_is_identity(rng):
    sv = random_state(3, rng)
    np.testing.assert_array_equal(apply_program(sv, program(3)).amps, sv.amps)
    np.testing.assert_array_equal(to_dense_matrix(program(3)), np.eye(8))


def test_walsh_program_gives_uniform():
    out = apply_program(basis_state(4, 0), program(4, WalshHadamard()))
    np.testing.assert_allclose(out.amps, uniform_state(4).amps, atol=1e-15)


def test_small_program_matches_dense_product():
    p = program(2, WalshHadamard(), PhaseInvert([3]), WalshHadamard())
    W = dense_walsh(2)
    expected = W @ dense_phase(2, [3]) @ W
    np.testing.assert_allclose(apply_program(basis_state(2, 0), p).amps, expected[:, 0], atol=1e-15)
    np.testing.assert_allclose(to_dense_matrix(p), expected, atol=1e-15)


def test_dense_examples():
    np.testing.assert_allclose(to_dense_matrix(program(2, WalshHadamard())), dense_walsh(2), atol=1e-15)
    np.testing.assert_array_equal(to_dense_matrix(program(1, PhaseInvert([1]))), np.diag([1, -1]))


def test_dense_guard_refuses():
    with pytest.raises(RefusalError):
        to_dense_matrix(program(DENSE_QUBIT_LIMIT + 1, WalshHadamard()))


@pytest.mark.parametrize("prim", [WalshHadamard(), PhaseInvert([1, 2]), Negate()])
def test_self_inverse_primitives(prim):
    assert invert_primitive(prim) == prim


def test_invert_reverses_order():
    g = random_gate(np.random.default_rng(0))
    a, b = OneQubit(g, 0), BasisPermutation([1, 2, 3, 0])
    inv = invert_program(program(2, a, b))
    assert inv.primitives[0] == invert_primitive(b)
    assert inv.primitives[1] == invert_primitive(a)
    np.testing.assert_array_equal(inv.primitives[0].perm, [3, 0, 1, 2])
    np.testing.assert_allclose(inv.primitives[1].gate.matrix, g.matrix.conj().T)


def test_invert_repeat_distributes_into_body(rng):
    body = random_program(3, 5, rng, allow_repeat=False)
    inv = invert_primitive(Repeat(body, 4))
    assert isinstance(inv, Repeat) and inv.count == 4
    assert inv.body == invert_program(body)


def test_invert_round_trip_random(rng):
    p = random_program(5, 50, rng)
    back = compose(p, invert_program(p))
    for _ in range(20):
        sv = random_state(5, rng)
        np.testing.assert_allclose(apply_program(sv, back).amps, sv.amps, atol=1e-9)


def test_compose_with_empty_and_mismatch(rng):
    p = random_program(3, 10, rng)
    assert compose(p, program(3)) == p
    with pytest.raises(ArgumentError):
        compose(p, program(4))


def test_compose_matches_sequential_two_register_stages():
    stages = two_register_stages(3, 3, (1, 2), [(1, 5)])
    U = compose(*(s.program for s in stages))
    seq = basis_state(6, 0)
    for s in stages:
        seq = apply_program(seq, s.program)
    np.testing.assert_allclose(apply_program(basis_state(6, 0), U).amps, seq.amps, atol=1e-15)


def test_apply_dimension_mismatch():
    with pytest.raises(ArgumentError):
        apply_program(basis_state(2, 0), program(3))


@pytest.mark.parametrize("s,t", [(0, 0), (3, 9), (15, 1)])
def test_walsh_amplitude_between(s, t):
    assert abs(amplitude_between(program(4, WalshHadamard()), s, t)) == pytest.approx(0.25, abs=1e-15)


def test_identity_amplitude_between():
    assert amplitude_between(program(3), 2, 2) == 1
    assert amplitude_between(program(3), 2, 5) == 0
    with pytest.raises(ArgumentError):
        amplitude_between(program(3), 0, 8)


@pytest.mark.parametrize("n,k", [(8, 1), (8, 3), (10, 5)])
def test_rotation_amplitude_between(n, k):
    p = gate_on_all(rotation_gate(k, n), n)
    r = 0b10110 & ((1 << n) - 1)
    t = r ^ ((1 << k) - 1)
    expected = (1 - k / n) ** ((n - k) / 2) * (k / n) ** (k / 2)
    assert abs(amplitude_between(p, r, t)) == pytest.approx(expected, rel=1e-12)


def test_amplitude_between_adjoint_relation(rng):
    p = random_program(4, 30, rng)
    for s, t in [(0, 5), (3, 3), (15, 7)]:
        a = amplitude_between(p, s, t)
        b = amplitude_between(invert_program(p), t, s)
        assert a == pytest.approx(b.conjugate(), abs=1e-12)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_adjoint_law(rng, n):
    p = random_program(n, 40, rng)
    np.testing.assert_allclose(to_dense_matrix(invert_program(p)), to_dense_matrix(p).conj().T, atol=1e-10)


@pytest.mark.parametrize("n", [2, 4, 6])
def test_program_matches_dense_on_basis(rng, n):
    p = random_program(n, 30, rng)
    d = to_dense_matrix(p)
    for i in range(1 << n):
        np.testing.assert_allclose(apply_program(basis_state(n, i), p).amps, d[:, i], atol=1e-10)


def test_permutation_sends_i_to_perm_i():
    out = apply_program(basis_state(2, 1), program(2, BasisPermutation([2, 3, 0, 1])))
    assert out.amps[3] == 1


def test_permutation_rejects_non_bijection():
    with pytest.raises(ArgumentError):
        BasisPermutation([0, 0, 1, 2])
    with pytest.raises(ArgumentError):
        program(3, BasisPermutation([1, 0]))


def test_permutation_from_partial_closes_chains():
    perm = permutation_from_partial({0: 5, 1: 9}, 4).perm
    assert perm[0] == 5 and perm[1] == 9
    assert perm[5] == 0 and perm[9] == 1
    assert sorted(perm) == list(range(16))


@given(st.lists(st.integers(0, 31), min_size=1, max_size=12, unique=True),
       st.lists(st.integers(0, 31), min_size=12, max_size=12, unique=True))
def test_permutation_from_partial_property(srcs, dsts):
    mapping = dict(zip(srcs, dsts))
    perm = permutation_from_partial(mapping, 5).perm
    assert sorted(perm.tolist()) == list(range(32))
    for a, b in mapping.items():
        assert perm[a] == b


def test_permutation_from_partial_not_injective():
    with pytest.raises(ArgumentError):
        permutation_from_partial({0: 3, 1: 3}, 2)


@pytest.mark.parametrize("prim", [
    OneQubit(rotation_gate(1, 2), 3),
    WalshHadamard((0, 5)),
    PhaseInvert([16]),
])
def test_validation_rejects_out_of_range(prim):
    with pytest.raises(ArgumentError):
        program(3, prim)


def test_count_ops_expands_repeat():
    body = program(2, WalshHadamard(), PhaseInvert([0]), Negate())
    p = program(2, Repeat(body, 5), WalshHadamard())
    assert count_ops(p) == 16


def test_then_appends():
    p = program(2, WalshHadamard()).then(Negate())
    assert p.primitives == (WalshHadamard(), Negate())


def test_dump_parse_round_trip(rng):
    p = random_program(4, 60, rng)
    text = dump_program(p)
    q = parse_program(text)
    assert q == p
    assert dump_program(q) == text


def test_dump_format_is_readable():
    p = program(3, WalshHadamard(), PhaseInvert([0, 1, 2, 3, 6]), Repeat(program(3, Negate()), 2))
    assert dump_program(p).splitlines() == [
        "program 3",
        "  wh all",
        "  phase 0-3,6",
        "  repeat 2",
        "    negate",
        "  end",
    ]


def test_parse_rejects_garbage():
    with pytest.raises(ArgumentError):
        parse_program("program 2\nfrobnicate\n")


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_random_programs_preserve_norm_and_invert(n, seed):
    r = np.random.default_rng(seed)
    p = random_program(n, 40, r)
    sv = random_state(n, r)
    out = apply_program(sv, p)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    back = apply_program(out, invert_program(p))
    np.testing.assert_allclose(back.amps, sv.amps, atol=1e-10)


def test_thousand_primitive_norm(rng):
    p = random_program(8, 1000, rng)
    assert apply_program(random_state(8, rng), p).norm() == pytest.approx(1.0, abs=1e-9)
