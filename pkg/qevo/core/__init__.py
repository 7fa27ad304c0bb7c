from qevo.core.circuit import (
    Circuit,
    Operation,
    capacity_for,
    depth,
    encode,
    load_circuit,
    op,
    save_circuit,
    t_count,
)
from qevo.core.gates import SINGLE_QUBIT_GATES, GateId, gate_matrix
from qevo.core.simulator import (
    DEFAULT_QUBIT_LIMIT,
    apply_circuit,
    circuit_unitary,
    simulate,
    simulate_batch,
)
from qevo.core.states import TargetState, check_density, to_density

__all__ = [
    "Circuit",
    "GateId",
    "Operation",
    "SINGLE_QUBIT_GATES",
    "TargetState",
    "DEFAULT_QUBIT_LIMIT",
    "apply_circuit",
    "capacity_for",
    "check_density",
    "circuit_unitary",
    "depth",
    "encode",
    "gate_matrix",
    "load_circuit",
    "op",
    "save_circuit",
    "simulate",
    "simulate_batch",
    "t_count",
    "to_density",
]
