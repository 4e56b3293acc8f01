import math
from functools import reduce

import numpy as np
import pytest
from scipy.linalg import expm

from qaoa_lab.amplitude import LayerParameters, ProblemSize, overlap
from qaoa_lab.errors import CapacityError, ParameterMismatchError
from qaoa_lab.statevector import (
    apply_mixer_layer,
    apply_phase_layer,
    oracle_overlap,
    prepare_plus,
    simulate,
    target_index,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def dense_mixer(n):
    """Sum of X_i as a dense matrix; qubit i is bit i, i.e. the i-th factor from the right."""
    terms = []
    for i in range(n):
        factors = [X if q == i else I2 for q in reversed(range(n))]
        terms.append(reduce(np.kron, factors))
    return sum(terms)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


class TestPreparePlus:
    def test_single_qubit(self):
        assert np.allclose(prepare_plus(1), [1 / math.sqrt(2)] * 2, atol=1e-15)

    def test_three_qubits(self):
        state = prepare_plus(3)
        assert state.shape == (8,)
        assert np.allclose(state, 2**-1.5, atol=1e-15)
        assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [1, 4, 9])
    def test_overlap_is_uniform(self, n):
        probs = np.abs(prepare_plus(n)) ** 2
        assert np.allclose(probs, 2.0**-n, rtol=1e-12)

    @pytest.mark.parametrize("n", [0, 23, 25])
    def test_capacity(self, n):
        with pytest.raises(CapacityError):
            prepare_plus(n)

    def test_cap_cannot_exceed_hard_limit(self):
        with pytest.raises(CapacityError):
            prepare_plus(25, max_qubits=30)


class TestPhaseLayer:
    def test_zero_and_full_period_are_identity(self):
        state = random_state(np.random.default_rng(0), 4)
        assert np.array_equal(apply_phase_layer(state, 5, 0.0), state)
        assert np.allclose(apply_phase_layer(state, 5, 2 * math.pi), state, atol=1e-15)

    def test_two_qubits_against_expm(self):
        state = random_state(np.random.default_rng(1), 2)
        proj = np.zeros((4, 4), dtype=complex)
        proj[3, 3] = 1
        expected = expm(-1j * math.pi * proj) @ state
        got = apply_phase_layer(state, [True, True], math.pi)
        assert np.allclose(got, expected, atol=1e-14)
        assert got[3] == pytest.approx(-state[3])
        assert np.array_equal(got[:3], state[:3])

    def test_input_not_mutated(self):
        state = prepare_plus(3)
        before = state.copy()
        apply_phase_layer(state, 2, 1.0)
        assert np.array_equal(state, before)

    def test_target_mismatch(self):
        with pytest.raises(ParameterMismatchError):
            apply_phase_layer(prepare_plus(3), [True, False], 1.0)
        with pytest.raises(ParameterMismatchError):
            apply_phase_layer(prepare_plus(3), 8, 1.0)

    def test_bad_state_length(self):
        with pytest.raises(ParameterMismatchError):
            apply_phase_layer(np.ones(6, dtype=complex), 0, 1.0)


class TestMixerLayer:
    def test_zero_is_identity(self):
        state = random_state(np.random.default_rng(2), 3)
        assert np.allclose(apply_mixer_layer(state, 0.0), state, atol=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_pi_is_global_sign(self, n):
        state = random_state(np.random.default_rng(n), n)
        assert np.allclose(apply_mixer_layer(state, math.pi), (-1) ** n * state, atol=1e-14)

    def test_three_qubits_against_expm(self):
        state = random_state(np.random.default_rng(3), 3)
        expected = expm(-0.4j * dense_mixer(3)) @ state
        assert np.allclose(apply_mixer_layer(state, 0.4), expected, atol=1e-14)

    @pytest.mark.parametrize("beta", [0.1, 1.3, 2.9, -0.7])
    def test_norm_preserved(self, beta):
        state = random_state(np.random.default_rng(4), 6)
        assert np.linalg.norm(apply_mixer_layer(state, beta)) == pytest.approx(1.0, abs=1e-12)


def test_full_circuit_against_dense_product():
    n = 4
    params = LayerParameters((0.3, 2.1), (0.8, 0.25))
    t = 0b1010
    proj = np.zeros((1 << n, 1 << n), dtype=complex)
    proj[t, t] = 1
    hx = dense_mixer(n)
    state = np.full(1 << n, 2 ** (-n / 2), dtype=complex)
    for gamma, beta in zip(params.gammas, params.betas):
        state = expm(-1j * beta * hx) @ (expm(-1j * gamma * proj) @ state)
    assert np.allclose(simulate(n, t, params), state, atol=1e-13)


class TestOracleOverlap:
    def test_identity_circuit(self):
        value = oracle_overlap(5, 1, 3, LayerParameters((0.0,), (0.0,)))
        assert value.f == pytest.approx(2.0**-5, rel=1e-12)

    def test_target_independence(self):
        params = LayerParameters((1.9, 0.6), (0.35, 1.2))
        values = [oracle_overlap(6, 2, t, params).scaled for t in range(64)]
        assert max(values) - min(values) < 1e-12

    def test_matches_closed_form(self):
        rng = np.random.default_rng(5)
        for n in (3, 7, 10):
            for p in (1, 3):
                params = LayerParameters(tuple(rng.uniform(0, 6, p)), tuple(rng.uniform(0, 3, p)))
                closed = overlap(ProblemSize(n, p), params).scaled
                assert oracle_overlap(n, p, int(rng.integers(1 << n)), params).scaled == \
                    pytest.approx(closed, abs=1e-10)

    def test_depth_mismatch(self):
        with pytest.raises(ParameterMismatchError):
            oracle_overlap(3, 2, 0, LayerParameters((0.1,), (0.2,)))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            oracle_overlap(23, 1, 0, LayerParameters((0.1,), (0.2,)))


def test_target_index_bit_order():
    assert target_index([True, False, True], 3) == 5
    assert target_index(6, 3) == 6
