"""Tests for the dense numerical backend."""

import numpy as np
import pytest

from fpp.algorithms import (
    phase_profile,
    sim_switch_circuit,
    six_query_n3,
    solve_profile,
    superperm_sim_switch,
)
from fpp.densesim import (
    PROBABILITY_TOL,
    build_promise_unitaries,
    fourier,
    pairwise_deviation,
    run_dense,
    run_dense_joint,
)
from fpp.errors import DimensionError, DomainError, UnsupportedError
from fpp.perms import FactoradicLabeling, enumerate_valid_labelings


def test_fourier_trivial():
    assert fourier(1).shape == (1, 1)
    assert abs(fourier(1)[0, 0] - 1) < 1e-12


def test_fourier_hadamard():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    assert np.allclose(fourier(2), h)


def test_fourier_unitarity():
    for m in (2, 6, 24):
        f = fourier(m)
        assert np.linalg.norm(f.conj().T @ f - np.eye(m)) < 1e-10


def test_n2_pauli_pair():
    lab = FactoradicLabeling(2)
    table = lab.validate().table
    units1 = build_promise_unitaries(2, 1, table)
    assert np.allclose(units1[0], [[0, 1], [1, 0]])
    assert np.allclose(units1[1], [[0, -1j], [1j, 0]])
    units0 = build_promise_unitaries(2, 0, table)
    assert np.allclose(units0[0], units0[1])


def test_n3_construction_satisfies_table():
    lab = FactoradicLabeling(3)
    table = lab.validate().table
    for y in range(6):
        units = build_promise_unitaries(3, y, table)
        assert units[0].shape == (216, 216)
        assert pairwise_deviation(units, table, y) < 1e-9


def test_construction_unsupported_n():
    lab = FactoradicLabeling(4)
    with pytest.raises(UnsupportedError):
        build_promise_unitaries(4, 0, lab.validate().table)


def test_construction_rejects_bad_y():
    lab = FactoradicLabeling(2)
    with pytest.raises(DomainError):
        build_promise_unitaries(2, 2, lab.validate().table)


def test_n2_product_matches_joint():
    # the product-state engine against the literal joint statevector
    lab = FactoradicLabeling(2)
    table = lab.validate().table
    c = sim_switch_circuit(2, lab)
    for y in (0, 1):
        units = build_promise_unitaries(2, y, table)
        for seed in (None, 11):
            a = run_dense(c, units, seed=seed)
            b = run_dense_joint(c, units, seed=seed)
            assert a.measured_y == b.measured_y == y
            assert np.allclose(a.probabilities, b.probabilities, atol=1e-10)
            assert a.peak_probability >= 1 - PROBABILITY_TOL


def test_n3_six_query_dense_vs_symbolic():
    lab = FactoradicLabeling(3)
    table = lab.validate().table
    circuit = six_query_n3(lab)
    profile = phase_profile(circuit, lab)
    for y in range(6):
        units = build_promise_unitaries(3, y, table)
        result = run_dense(circuit, units)
        assert result.measured_y == solve_profile(profile, y).solved_y == y
        assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_n3_sim_switch_dense():
    lab = FactoradicLabeling(3)
    table = lab.validate().table
    circuit = sim_switch_circuit(3, lab)
    for y in (0, 2, 5):
        units = build_promise_unitaries(3, y, table)
        result = run_dense(circuit, units)
        assert result.measured_y == y
        assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_dense_random_initial_states():
    lab = FactoradicLabeling(3)
    table = lab.validate().table
    circuit = superperm_sim_switch(3, lab)
    units = build_promise_unitaries(3, 4, table)
    result = run_dense(circuit, units, seed=1234)
    assert result.measured_y == 4
    assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_dense_alternative_labeling():
    lab = enumerate_valid_labelings(3)[5]
    table = lab.validate().table
    circuit = six_query_n3(lab)
    for y in (1, 3):
        units = build_promise_unitaries(3, y, table)
        result = run_dense(circuit, units)
        assert result.measured_y == y
        assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_dense_nlogn_bit_control():
    # numerically confirms that the commutation-rewrite phases of the
    # bit-controlled circuit assemble the exact Fourier state
    from fpp.algorithms import nlogn_circuit
    from fpp.circuit import eliminate_controlled_unknowns

    lab = FactoradicLabeling(3)
    table = lab.validate().table
    for circuit in (nlogn_circuit(3), eliminate_controlled_unknowns(nlogn_circuit(3))):
        for y in (1, 4, 5):
            units = build_promise_unitaries(3, y, table)
            result = run_dense(circuit, units)
            assert result.measured_y == y
            assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_dense_sqrt_circuit():
    # numerically confirms the block-decomposition phase cancellation
    from fpp.algorithms import sqrt_circuit

    lab = FactoradicLabeling(3)
    table = lab.validate().table
    circuit = sqrt_circuit(3, lab)
    for y in (2, 3):
        units = build_promise_unitaries(3, y, table)
        result = run_dense(circuit, units)
        assert result.measured_y == y
        assert result.peak_probability >= 1 - PROBABILITY_TOL


def test_dense_dimension_guard():
    lab = FactoradicLabeling(3)
    table = lab.validate().table
    units = build_promise_unitaries(3, 0, table)
    c = sim_switch_circuit(3, lab)
    with pytest.raises(DimensionError):
        run_dense_joint(c, units)  # 216^4 * 6 amplitudes


def test_dense_probabilities_normalized():
    lab = FactoradicLabeling(2)
    table = lab.validate().table
    units = build_promise_unitaries(2, 1, table)
    result = run_dense(sim_switch_circuit(2, lab), units)
    assert abs(result.probabilities.sum() - 1) < 1e-9
