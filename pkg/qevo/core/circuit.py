"""List-based circuit genomes.

A circuit is an ordered list of operations on a fixed number of qubits, the
representation every genetic operator manipulates. Depth is the length of
that list, not the number of parallel layers: one-for-one substitutions keep
the depth constant and deletions decrease it by exactly one.

"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterable, NamedTuple, Tuple, Union

import numpy as np

from qevo.core.gates import IDENTITY_INDEX, GateId
from qevo.errors import InvalidInput, InvalidWire, ParseError

__all__ = [
    "Operation",
    "Circuit",
    "depth",
    "t_count",
    "capacity_for",
    "encode",
    "load_circuit",
    "op",
    "save_circuit",
]


class Operation(NamedTuple):
    """One gate application. For CNOT, wires are (control, target)."""

    gate: GateId
    wires: Tuple[int, ...]

    def __str__(self) -> str:
        return f"{self.gate.value}@{','.join(str(w) for w in self.wires)}"

    def to_json(self) -> Dict[str, Any]:
        return {"gate": self.gate.value, "wires": list(self.wires)}


def op(gate: Union[GateId, str], *wires: int) -> Operation:
    """Shorthand to build an operation: `op("CNOT", 0, 1)`."""
    return Operation(GateId(gate), tuple(int(w) for w in wires))


@dataclass(frozen=True)
class Circuit:
    n_qubits: int
    ops: Tuple[Operation, ...] = field(default=())

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidInput(
                f"A circuit needs at least one qubit, got n_qubits={self.n_qubits}."
            )
        object.__setattr__(self, "ops", tuple(self.ops))
        for position, operation in enumerate(self.ops):
            _validate_operation(operation, self.n_qubits, position)

    def __len__(self) -> int:
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.n_qubits != self.n_qubits:
            raise InvalidInput(
                f"Cannot concatenate a {self.n_qubits}-qubit circuit with a"
                f" {other.n_qubits}-qubit circuit."
            )
        return Circuit(self.n_qubits, self.ops + other.ops)

    def __str__(self) -> str:
        return f"[{', '.join(str(o) for o in self.ops)}]"

    def replace_ops(self, ops: Iterable[Operation]) -> "Circuit":
        return Circuit(self.n_qubits, tuple(ops))

    def to_json(self) -> Dict[str, Any]:
        return {"n_qubits": self.n_qubits, "ops": [o.to_json() for o in self.ops]}

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Circuit":
        try:
            n_qubits = int(data["n_qubits"])
            ops = tuple(
                Operation(GateId(o["gate"]), tuple(int(w) for w in o["wires"]))
                for o in data["ops"]
            )
        except (KeyError, TypeError) as e:
            raise ParseError(f"malformed circuit: {e!r}") from e
        except ValueError as e:
            raise ParseError(f"unknown gate: {e}") from e
        return cls(n_qubits, ops)


def _validate_operation(operation: Operation, n_qubits: int, position: int) -> None:
    gate, wires = operation
    if len(wires) != gate.arity:
        raise InvalidInput(
            f"Operation {position} ({gate.value}) acts on {gate.arity} wire(s),"
            f" got {len(wires)}."
        )
    if len(set(wires)) != len(wires):
        raise InvalidWire(f"Operation {position} ({gate.value}) repeats a wire: {wires}.")
    for wire in wires:
        if not 0 <= wire < n_qubits:
            raise InvalidWire(
                f"Operation {position} ({gate.value}) references wire {wire} on a"
                f" {n_qubits}-qubit circuit."
            )


def depth(circuit: Circuit) -> int:
    return len(circuit.ops)


def t_count(circuit: Circuit) -> int:
    return sum(1 for o in circuit.ops if o.gate.is_t)


def capacity_for(length: int, bucket: int = 8) -> int:
    """Padded genome length; bucketing bounds the number of compilations."""
    return max(bucket, -(-length // bucket) * bucket)


def encode(circuit: Circuit, capacity: int) -> Tuple[np.ndarray, np.ndarray]:
    """Integer encoding of a genome for the simulator.

    Returns the gate indices, shape (capacity,), and the wires, shape
    (capacity, 2). Trailing slots hold the identity on wire 0; the second
    wire of single-qubit operations is unused and set to the first.

    """
    if capacity < len(circuit.ops):
        raise InvalidInput(
            f"Capacity {capacity} is smaller than the genome length {len(circuit.ops)}."
        )
    gates = np.full(capacity, IDENTITY_INDEX, dtype=np.int32)
    wires = np.zeros((capacity, 2), dtype=np.int32)
    for i, (gate, gate_wires) in enumerate(circuit.ops):
        gates[i] = gate.position
        wires[i, 0] = gate_wires[0]
        wires[i, 1] = gate_wires[-1]
    return gates, wires


def load_circuit(path: Union[str, Path]) -> Circuit:
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(e.msg, e.lineno) from e
    return Circuit.from_json(data)


def save_circuit(circuit: Circuit, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(circuit.to_json(), f, indent=2)
        f.write("\n")
