"""Exact dense statevector simulation.

Wire 0 is the most significant bit of a basis index: on two qubits the basis
is ordered |00>, |01>, |10>, |11> with the first label on wire 0.

Gates are applied in place on amplitude pairs rather than by building the
2**n x 2**n unitary. A single-qubit gate on wire w mixes, for every basis
index i, the amplitudes of i with bit w cleared and set:

    psi'[i] = U[b, 0] * psi[i & ~m] + U[b, 1] * psi[i | m]

where m is the mask of wire w and b the value of bit w in i. CNOT is a
permutation of the amplitudes that flips the target bit wherever the control
bit is set. Both updates are written with gathers so that the wires can be
traced values: a genome is an integer array, and one compiled program
simulates any genome of a given qubit count and padded length.

"""
from functools import partial
from typing import Optional, Sequence

import jax
import jax.numpy as jnp
import numpy as np

from qevo.core.circuit import Circuit, capacity_for, encode
from qevo.core.gates import CNOT_INDEX, SINGLE_QUBIT_MATRICES, GateId, gate_matrix
from qevo.errors import DimensionMismatch, InvalidInput, QubitLimitExceeded

__all__ = [
    "DEFAULT_QUBIT_LIMIT",
    "apply_circuit",
    "circuit_unitary",
    "embed_operation",
    "simulate",
    "simulate_batch",
    "zero_state",
]

DEFAULT_QUBIT_LIMIT = 12


def zero_state(n_qubits: int) -> jnp.ndarray:
    return jnp.zeros(2 ** n_qubits, dtype=jnp.complex128).at[0].set(1.0)


def _apply_operation(psi, gate, control, target, n_qubits: int):
    idx = jnp.arange(psi.shape[0])

    shift = n_qubits - 1 - control
    mask = jnp.left_shift(1, shift)
    bit = jnp.right_shift(idx, shift) & 1

    u = SINGLE_QUBIT_MATRICES[gate]
    low = psi[idx & ~mask]
    high = psi[idx | mask]
    rotated = u[bit, 0] * low + u[bit, 1] * high

    target_mask = jnp.left_shift(1, n_qubits - 1 - target)
    flipped = psi[jnp.where(bit == 1, idx ^ target_mask, idx)]

    return jnp.where(gate == CNOT_INDEX, flipped, rotated)


@partial(jax.jit, static_argnames=("n_qubits",))
def _evolve(psi, gates, wires, n_qubits: int):
    def one_step(state, operation):
        gate, control, target = operation
        return _apply_operation(state, gate, control, target, n_qubits), None

    psi, _ = jax.lax.scan(one_step, psi, (gates, wires[:, 0], wires[:, 1]))
    return psi


@partial(jax.jit, static_argnames=("n_qubits",))
def _evolve_batch(gates, wires, n_qubits: int):
    psi = zero_state(n_qubits)
    return jax.lax.map(
        lambda genome: _evolve(psi, *genome, n_qubits=n_qubits), (gates, wires)
    )


def _check_limit(n_qubits: int, qubit_limit: int) -> None:
    if n_qubits > qubit_limit:
        raise QubitLimitExceeded(
            f"A {n_qubits}-qubit statevector holds {2 ** n_qubits:,} amplitudes,"
            f" above the configured limit of {qubit_limit} qubits."
        )


def simulate(
    circuit: Circuit,
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
    capacity: Optional[int] = None,
) -> jnp.ndarray:
    """Statevector prepared by the circuit acting on |0...0>.

    Parameters
    ----------
    circuit
        The genome to simulate.
    qubit_limit
        Largest qubit count we accept to simulate.
    capacity
        Length the genome is padded to. Genomes padded to the same length
        share a compiled program; by default the length is rounded up to a
        multiple of 8.

    """
    _check_limit(circuit.n_qubits, qubit_limit)
    return apply_circuit(circuit, zero_state(circuit.n_qubits), capacity)


def apply_circuit(
    circuit: Circuit, state: jnp.ndarray, capacity: Optional[int] = None
) -> jnp.ndarray:
    """Apply the circuit's operations to an arbitrary statevector."""
    if state.shape != (2 ** circuit.n_qubits,):
        raise DimensionMismatch(
            f"A {circuit.n_qubits}-qubit circuit cannot act on a state of"
            f" shape {state.shape}."
        )
    capacity = capacity or capacity_for(len(circuit))
    gates, wires = encode(circuit, capacity)
    return _evolve(
        jnp.asarray(state, dtype=jnp.complex128), gates, wires, n_qubits=circuit.n_qubits
    )


def simulate_batch(
    circuits: Sequence[Circuit],
    qubit_limit: int = DEFAULT_QUBIT_LIMIT,
    capacity: Optional[int] = None,
) -> jnp.ndarray:
    """Simulate genomes on the same qubit count in one compiled pass.

    Returns an array of shape (len(circuits), 2**n_qubits).
    """
    if not circuits:
        raise InvalidInput("Cannot simulate an empty batch of circuits.")
    n_qubits = circuits[0].n_qubits
    if any(c.n_qubits != n_qubits for c in circuits):
        raise InvalidInput(
            "All circuits of a batch must act on the same number of qubits."
        )
    _check_limit(n_qubits, qubit_limit)

    capacity = capacity or capacity_for(max(len(c) for c in circuits))
    encoded = [encode(c, capacity) for c in circuits]
    gates = np.stack([g for g, _ in encoded])
    wires = np.stack([w for _, w in encoded])
    return _evolve_batch(gates, wires, n_qubits=n_qubits)


# --------------------------------------------------------------------
#                     == FULL UNITARY (reference) ==
#
# Building the full matrix costs O(4**n) memory; it is only used to verify
# rewrite rules and small circuits.
# --------------------------------------------------------------------


_P0 = np.array([[1, 0], [0, 0]], dtype=np.complex128)
_P1 = np.array([[0, 0], [0, 1]], dtype=np.complex128)


def _kron_on_wires(factors, n_qubits: int) -> np.ndarray:
    result = np.ones((1, 1), dtype=np.complex128)
    for wire in range(n_qubits):
        result = np.kron(result, factors.get(wire, np.eye(2, dtype=np.complex128)))
    return result


def embed_operation(operation, n_qubits: int) -> np.ndarray:
    """Unitary of one operation on the full register."""
    gate, wires = operation
    if gate is GateId.CNOT:
        control, target = wires
        x = np.asarray(gate_matrix(GateId.X))
        return _kron_on_wires({control: _P0}, n_qubits) + _kron_on_wires(
            {control: _P1, target: x}, n_qubits
        )
    return _kron_on_wires({wires[0]: np.asarray(gate_matrix(gate))}, n_qubits)


def circuit_unitary(circuit: Circuit) -> np.ndarray:
    unitary = np.eye(2 ** circuit.n_qubits, dtype=np.complex128)
    for operation in circuit.ops:
        unitary = embed_operation(operation, circuit.n_qubits) @ unitary
    return unitary
