import numpy as np
import pytest

from qevo.core.states import (
    TargetState,
    check_density,
    check_normalized,
    n_qubits_of,
    to_density,
)
from qevo.errors import InvalidInput, NotDensityMatrix, NotNormalized


def test_density_of_a_basis_state():
    rho = np.asarray(to_density([0, 1]))
    np.testing.assert_array_equal(rho, [[0, 0], [0, 1]])


def test_density_of_a_superposition():
    plus = np.ones(2) / np.sqrt(2)
    np.testing.assert_allclose(np.asarray(to_density(plus)), np.full((2, 2), 0.5))


def test_unnormalized_states_are_rejected():
    with pytest.raises(NotNormalized):
        check_normalized([1, 1])
    with pytest.raises(NotNormalized):
        to_density([0, 0])


invalid_densities = [
    {"rho": [[0.5, 0.1j], [0.1j, 0.5]], "reason": "not hermitian"},
    {"rho": [[0.5, 0], [0, 0.6]], "reason": "trace"},
    {"rho": [[1.5, 0], [0, -0.5]], "reason": "negative eigenvalue"},
    {"rho": [1, 0], "reason": "not square"},
]


@pytest.mark.parametrize("case", invalid_densities)
def test_invalid_density_matrices(case):
    with pytest.raises(NotDensityMatrix):
        check_density(case["rho"])


def test_mixed_state_is_a_density_matrix():
    check_density(np.eye(4) / 4)


@pytest.mark.parametrize("dimension,n_qubits", [(2, 1), (4, 2), (64, 6)])
def test_qubit_count(dimension, n_qubits):
    assert n_qubits_of(dimension) == n_qubits


@pytest.mark.parametrize("dimension", [1, 3, 6])
def test_dimension_must_be_a_power_of_two(dimension):
    with pytest.raises(InvalidInput):
        n_qubits_of(dimension)


def test_target_state():
    target = TargetState.from_amplitudes([1 / np.sqrt(2), 0, 0, 1j / np.sqrt(2)])
    assert target.n_qubits == 2
    assert target.density.shape == (4, 4)
    assert target.to_json()[3] == [0.0, pytest.approx(1 / np.sqrt(2))]
    with pytest.raises(InvalidInput):
        TargetState.from_amplitudes(np.ones(3) / np.sqrt(3))
