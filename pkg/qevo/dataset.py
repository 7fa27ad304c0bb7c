"""Datasets of random target states.

A dataset holds random circuits on a fixed number of qubits. Each circuit
is optimized, then kept only if it is still at least `depth_min` long and
nontrivial; the state it prepares is cached with the circuit.

Datasets are stored as JSON lines, one record per line:

    {"circuit": {...}, "id": "q6-s1-0000", "provenance": {...}, "statevector": [[re, im], ...]}

Keys are sorted and floats written in their shortest round-trip form, so a
dataset file is a function of its generation parameters.

"""
import hashlib
import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Union

import jax
import numpy as np

from qevo.core.circuit import Circuit, depth
from qevo.core.simulator import simulate
from qevo.core.states import TargetState
from qevo.errors import (
    GenerationStalled,
    InvalidInput,
    InvalidWire,
    ParseError,
    ValidationError,
)
from qevo.evolution.population import is_trivial, random_circuit
from qevo.jax import generator
from qevo.optimizer import optimize

__all__ = [
    "DatasetSpec",
    "DatasetSummary",
    "TargetRecord",
    "dataset_hash",
    "generate_dataset",
    "generate_target",
    "load_dataset",
    "save_dataset",
]

logger = logging.getLogger(__name__)

MAX_REDRAWS = 1000
QUBIT_RANGE = (4, 8)
DEPTH_RANGE = (5, 15)
STATE_TOLERANCE = 1e-8


class DatasetSpec(NamedTuple):
    n_qubits: int
    count: int
    depth_min: int = DEPTH_RANGE[0]
    depth_max: int = DEPTH_RANGE[1]
    seed: int = 0

    def validate(self, strict: bool = True) -> "DatasetSpec":
        """Check the parameters; `strict` also enforces the default ranges."""
        if self.count < 0:
            raise InvalidInput(f"count must be non-negative, got {self.count}.")
        if not 1 <= self.depth_min <= self.depth_max:
            raise InvalidInput(
                f"Depth bounds must satisfy 1 <= depth_min <= depth_max, got"
                f" {self.depth_min} and {self.depth_max}."
            )
        if self.n_qubits < 1:
            raise InvalidInput(f"n_qubits must be positive, got {self.n_qubits}.")
        if strict:
            lo, hi = QUBIT_RANGE
            if not lo <= self.n_qubits <= hi:
                raise InvalidInput(f"n_qubits must be in [{lo}, {hi}], got {self.n_qubits}.")
            lo, hi = DEPTH_RANGE
            if self.depth_min < lo or self.depth_max > hi:
                raise InvalidInput(
                    f"Depths must lie in [{lo}, {hi}], got {self.depth_min}..{self.depth_max}."
                )
        return self

    @property
    def digest(self) -> str:
        text = json.dumps(self._asdict(), sort_keys=True)
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class TargetRecord(NamedTuple):
    id: str
    circuit: Circuit
    statevector: np.ndarray
    provenance: Dict[str, Any]

    @property
    def target(self) -> TargetState:
        return TargetState.from_amplitudes(self.statevector)

    @property
    def n_qubits(self) -> int:
        return self.circuit.n_qubits

    def to_json(self) -> Dict[str, Any]:
        return {
            "id": self.id,
            "circuit": self.circuit.to_json(),
            "statevector": [[float(a.real), float(a.imag)] for a in self.statevector],
            "provenance": dict(self.provenance),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


class DatasetSummary(NamedTuple):
    count: int
    depth_histogram: Dict[int, int]
    sha256: str

    def __str__(self) -> str:
        histogram = ", ".join(f"{d}: {n}" for d, n in sorted(self.depth_histogram.items()))
        return f"{self.count} record(s); depths {{{histogram}}}; sha256 {self.sha256}"


def record_id(spec: DatasetSpec, index: int) -> str:
    return f"q{spec.n_qubits}-s{spec.seed}-{index:04d}"


def generate_target(
    spec: DatasetSpec, index: int, rng_key: Optional[jax.Array] = None
) -> TargetRecord:
    """Draw the `index`-th target of a dataset.

    Circuits are drawn as for an initial population, optimized, and redrawn
    when the optimized circuit is shorter than `depth_min` or trivial.

    Raises
    ------
    GenerationStalled
        When no acceptable circuit is found in 1,000 draws.

    """
    if rng_key is None:
        rng_key = jax.random.fold_in(jax.random.PRNGKey(spec.seed), index)
    rng = generator(rng_key)

    for _ in range(MAX_REDRAWS):
        circuit = optimize(
            random_circuit(spec.n_qubits, spec.depth_min, spec.depth_max, rng)
        )
        if len(circuit) < spec.depth_min or is_trivial(circuit):
            continue
        return TargetRecord(
            id=record_id(spec, index),
            circuit=circuit,
            statevector=np.asarray(simulate(circuit)),
            provenance={"seed": spec.seed, "spec_hash": spec.digest, "index": index},
        )

    raise GenerationStalled(
        f"No acceptable target after {MAX_REDRAWS} draws for index {index} of {spec}."
    )


def summarize(records: Iterable[TargetRecord], sha256: str) -> DatasetSummary:
    records = list(records)
    histogram = Counter(depth(r.circuit) for r in records)
    return DatasetSummary(len(records), dict(sorted(histogram.items())), sha256)


def save_dataset(records: Iterable[TargetRecord], path: Union[str, Path]) -> str:
    """Write records as JSON lines; returns the SHA-256 of the file."""
    text = "".join(record.dumps() + "\n" for record in records)
    Path(path).write_text(text, encoding="utf-8")
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def generate_dataset(
    spec: DatasetSpec, path: Union[str, Path], strict: bool = True
) -> DatasetSummary:
    spec = spec.validate(strict)
    logger.info("dataset: generate %d target(s) on %d qubit(s)", spec.count, spec.n_qubits)
    records = [generate_target(spec, index) for index in range(spec.count)]
    summary = summarize(records, save_dataset(records, path))
    logger.info("dataset: %s", summary)
    return summary


def dataset_hash(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# --------------------------------------------------------------------
#                     == LOADING ==
# --------------------------------------------------------------------


def _parse_record(line: str, lineno: int) -> TargetRecord:
    try:
        data = json.loads(line)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, lineno) from e
    try:
        identifier = str(data["id"])
        amplitudes = np.array(
            [complex(float(re), float(im)) for re, im in data["statevector"]],
            dtype=np.complex128,
        )
        provenance = dict(data.get("provenance", {}))
        circuit_data = data["circuit"]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed record: {e!r}", lineno) from e

    try:
        circuit = Circuit.from_json(circuit_data)
    except ParseError as e:
        raise ParseError(str(e), lineno) from e
    except (InvalidInput, InvalidWire) as e:
        raise ValidationError(f"invalid circuit: {e}", identifier) from e
    return TargetRecord(identifier, circuit, amplitudes, provenance)


def _validate_record(record: TargetRecord) -> None:
    expected = 2 ** record.circuit.n_qubits
    if record.statevector.shape != (expected,):
        raise ValidationError(
            f"statevector has {record.statevector.shape[0]} amplitudes, expected {expected}",
            record.id,
        )
    state = np.asarray(simulate(record.circuit))
    error = float(np.max(np.abs(state - record.statevector)))
    if error > STATE_TOLERANCE:
        raise ValidationError(
            f"cached statevector differs from the circuit's state by {error:.3g}",
            record.id,
        )


def load_dataset(path: Union[str, Path]) -> List[TargetRecord]:
    """Load and verify a dataset.

    Raises
    ------
    ParseError
        With the line number of a malformed line.
    ValidationError
        With the id of a record whose circuit is invalid or whose cached
        statevector does not match its circuit.

    """
    path = Path(path)
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            record = _parse_record(line, lineno)
            _validate_record(record)
            records.append(record)
    logger.info(
        "dataset: loaded %d record(s) from %s (sha256 %s)",
        len(records),
        path,
        dataset_hash(path),
    )
    return records
