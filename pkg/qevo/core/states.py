"""Target states and density matrices.

The search always prepares pure states, so targets are stored as
statevectors. The density matrix is derived on demand for the Uhlmann
fidelity and for external density-matrix targets.

"""
from typing import NamedTuple

import jax.numpy as jnp
import numpy as np

from qevo.errors import InvalidInput, NotDensityMatrix, NotNormalized

__all__ = [
    "TargetState",
    "check_density",
    "check_normalized",
    "n_qubits_of",
    "to_density",
]

NORM_TOLERANCE = 1e-8
DENSITY_TOLERANCE = 1e-10


def n_qubits_of(dimension: int) -> int:
    n_qubits = int(dimension).bit_length() - 1
    if dimension < 2 or 2 ** n_qubits != dimension:
        raise InvalidInput(
            f"A state of dimension {dimension} is not a register of qubits."
        )
    return n_qubits


def check_normalized(state, tolerance: float = NORM_TOLERANCE) -> jnp.ndarray:
    state = jnp.asarray(state, dtype=jnp.complex128)
    if state.ndim != 1:
        raise InvalidInput(f"A statevector is one-dimensional, got shape {state.shape}.")
    norm = float(jnp.linalg.norm(state))
    if abs(norm - 1.0) > tolerance:
        raise NotNormalized(f"The state has norm {norm!r}, expected 1.")
    return state


def to_density(state) -> jnp.ndarray:
    """The projector |psi><psi| of a normalized statevector."""
    state = check_normalized(state)
    return jnp.outer(state, jnp.conj(state))


def check_density(rho, tolerance: float = DENSITY_TOLERANCE) -> jnp.ndarray:
    """Validate a density matrix: Hermitian, unit trace and positive semidefinite."""
    rho = jnp.asarray(rho, dtype=jnp.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise NotDensityMatrix(f"A density matrix is square, got shape {rho.shape}.")

    if float(jnp.max(jnp.abs(rho - jnp.conj(rho.T)))) > tolerance:
        raise NotDensityMatrix("The matrix is not Hermitian.")

    trace = complex(jnp.trace(rho))
    if abs(trace - 1.0) > tolerance:
        raise NotDensityMatrix(f"The matrix has trace {trace!r}, expected 1.")

    smallest = float(jnp.min(jnp.linalg.eigvalsh(rho)))
    if smallest < -tolerance:
        raise NotDensityMatrix(
            f"The matrix has a negative eigenvalue {smallest!r}."
        )
    return rho


class TargetState(NamedTuple):
    """The state the search is asked to prepare."""

    statevector: jnp.ndarray

    @classmethod
    def from_amplitudes(cls, amplitudes) -> "TargetState":
        state = check_normalized(amplitudes)
        n_qubits_of(state.shape[0])
        return cls(state)

    @property
    def n_qubits(self) -> int:
        return n_qubits_of(self.statevector.shape[0])

    @property
    def density(self) -> jnp.ndarray:
        return to_density(self.statevector)

    def to_json(self):
        amplitudes = np.asarray(self.statevector)
        return [[float(a.real), float(a.imag)] for a in amplitudes]
