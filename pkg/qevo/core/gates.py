"""The Clifford+T gate set.

The gate set is fixed to {H, X, Y, Z, S, Sdg, T, Tdg, CNOT}. It is universal,
contains the inverses the peephole optimizer needs to cancel gates, and gives
the change mutation eight single-qubit gates to pick from.

Gates are indexed by their position in `GateId`; the simulator works on these
indices. `IDENTITY_INDEX` is an internal operation used to pad genomes to a
fixed length and never appears in a circuit.

"""
from enum import Enum
from typing import Tuple

import jax.numpy as jnp
import numpy as np

__all__ = [
    "GateId",
    "CNOT_INDEX",
    "IDENTITY_INDEX",
    "SINGLE_QUBIT_GATES",
    "SINGLE_QUBIT_MATRICES",
    "gate_matrix",
]


class GateId(str, Enum):
    H = "H"
    X = "X"
    Y = "Y"
    Z = "Z"
    S = "S"
    Sdg = "Sdg"
    T = "T"
    Tdg = "Tdg"
    CNOT = "CNOT"

    @property
    def arity(self) -> int:
        return 2 if self is GateId.CNOT else 1

    @property
    def is_t(self) -> bool:
        return self in (GateId.T, GateId.Tdg)

    @property
    def position(self) -> int:
        return _INDICES[self]

    def __str__(self) -> str:
        return self.value


_INDICES = {gate: i for i, gate in enumerate(GateId)}

CNOT_INDEX = _INDICES[GateId.CNOT]
IDENTITY_INDEX = len(GateId)

SINGLE_QUBIT_GATES: Tuple[GateId, ...] = tuple(g for g in GateId if g.arity == 1)


_SQRT2 = 1 / np.sqrt(2)
_PHASE_T = np.exp(1j * np.pi / 4)

_MATRICES = {
    GateId.H: np.array([[_SQRT2, _SQRT2], [_SQRT2, -_SQRT2]], dtype=np.complex128),
    GateId.X: np.array([[0, 1], [1, 0]], dtype=np.complex128),
    GateId.Y: np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    GateId.Z: np.array([[1, 0], [0, -1]], dtype=np.complex128),
    GateId.S: np.array([[1, 0], [0, 1j]], dtype=np.complex128),
    GateId.Sdg: np.array([[1, 0], [0, -1j]], dtype=np.complex128),
    GateId.T: np.array([[1, 0], [0, _PHASE_T]], dtype=np.complex128),
    GateId.Tdg: np.array([[1, 0], [0, np.conj(_PHASE_T)]], dtype=np.complex128),
    GateId.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
    ),
}


def gate_matrix(gate: GateId) -> jnp.ndarray:
    """Unitary of the gate, of shape (2**arity, 2**arity).

    For CNOT the first wire is the control and the most significant bit of
    the basis index, so the matrix swaps |10> and |11>.
    """
    return jnp.asarray(_MATRICES[GateId(gate)])


# Stacked table indexed by gate index. The CNOT row is a placeholder since
# CNOT is applied as a permutation, and the last row is the padding identity.
SINGLE_QUBIT_MATRICES = jnp.asarray(
    np.stack(
        [_MATRICES[g] if g.arity == 1 else np.eye(2) for g in GateId] + [np.eye(2)]
    ).astype(np.complex128)
)
