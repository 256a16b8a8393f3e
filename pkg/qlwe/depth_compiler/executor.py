"""Structural validation and dense execution of layered circuits.

Dense states index qubit 0 as the most significant bit, so the r1 ancillas
form the leading block and the persistent register the trailing one.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import CircuitValidationError, ParameterError, SizeGuardError
from qlwe.schemas.circuit import (
    ClassicalCorrection,
    GateBasis,
    GateKind,
    GateOp,
    LayeredCircuit,
    Measure,
    QuantumLayer,
)

logger = logging.getLogger(__name__)

_SQRT2_INV = 1 / math.sqrt(2)
GATE_MATRICES = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT2_INV,
    GateKind.T: np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
}

BASIS_GATES = {
    GateBasis.B_R: {GateKind.H, GateKind.T, GateKind.CNOT},
    GateBasis.B: {GateKind.H, GateKind.T, GateKind.S, GateKind.X, GateKind.Z, GateKind.UNITARY, GateKind.CNOT},
}
BASIS_GATES[GateBasis.MODELED] = BASIS_GATES[GateBasis.B] | {GateKind.OPAQUE}


@dataclass(frozen=True)
class MeasurementLog:
    layer: int
    outcome: tuple[int, ...]
    probability: float


def gate_matrix(gate: GateOp) -> np.ndarray:
    if gate.kind == GateKind.UNITARY:
        return np.array([[complex(re, im) for re, im in row] for row in gate.matrix], dtype=complex)
    return GATE_MATRICES[gate.kind]


def critical_path(layer: QuantumLayer) -> int:
    return layer.critical_path()


def classical_depth(correction: ClassicalCorrection) -> int:
    return correction.xor_depth()


def validate_circuit(circuit: LayeredCircuit) -> None:
    """Raise CircuitValidationError on the first structural violation."""
    total = circuit.total_qubits
    allowed = BASIS_GATES[circuit.basis]
    previous = None
    for position, layer in enumerate(circuit.layers):
        if isinstance(layer, QuantumLayer):
            for gates in layer.slices:
                used: set[int] = set()
                for gate in gates:
                    if gate.kind not in allowed:
                        raise CircuitValidationError(f"layer {position}: {gate.kind.value} is outside basis {circuit.basis.value}")
                    if any(q < 0 or q >= total for q in gate.qubits):
                        raise CircuitValidationError(f"layer {position}: qubit index out of range in {gate.qubits}")
                    if used & set(gate.qubits):
                        raise CircuitValidationError(f"layer {position}: gates in one slice share qubits")
                    used |= set(gate.qubits)
                    if gate.kind == GateKind.UNITARY:
                        u = gate_matrix(gate)
                        if u.shape != (2, 2) or not np.allclose(u.conj().T @ u, np.eye(2), atol=1e-9):
                            raise CircuitValidationError(f"layer {position}: matrix is not a 2x2 unitary")
            computed = critical_path(layer)
            if layer.declared_depth != computed:
                raise CircuitValidationError(
                    f"layer {position}: declared depth {layer.declared_depth} but critical path is {computed}"
                )
        elif isinstance(layer, ClassicalCorrection):
            if not isinstance(previous, Measure):
                raise CircuitValidationError(f"layer {position}: a correction must follow a measurement")
            r1 = circuit.r1
            if len(layer.matrix_gf2) != r1 or any(len(row) != r1 for row in layer.matrix_gf2):
                raise CircuitValidationError(f"layer {position}: correction matrix must be {r1}x{r1}")
            if layer.offset is not None and len(layer.offset) != r1:
                raise CircuitValidationError(f"layer {position}: offset must have {r1} bits")
            if any(v not in (0, 1) for row in layer.matrix_gf2 for v in row):
                raise CircuitValidationError(f"layer {position}: correction entries must be bits")
            computed = classical_depth(layer)
            ceiling = settings.FANOUT_CLASSICAL_FACTOR * max(1, math.ceil(math.log2(max(r1, 1))))
            if not computed <= layer.declared_depth <= ceiling:
                raise CircuitValidationError(
                    f"layer {position}: classical depth {layer.declared_depth} outside [{computed}, {ceiling}]"
                )
        previous = layer


def apply_correction(correction: ClassicalCorrection, bits: Sequence[int]) -> tuple[int, ...]:
    matrix = np.array(correction.matrix_gf2, dtype=np.int64).reshape(len(bits), len(bits))
    out = matrix.dot(np.array(bits, dtype=np.int64)) % 2
    if correction.offset is not None:
        out = (out + np.array(correction.offset)) % 2
    return tuple(int(v) for v in out)


def _apply_gate(psi: np.ndarray, gate: GateOp) -> np.ndarray:
    if gate.kind == GateKind.CNOT:
        control, target = gate.qubits
        index = [slice(None)] * psi.ndim
        index[control] = 1
        sub = psi[tuple(index)]
        psi = psi.copy()
        psi[tuple(index)] = np.flip(sub, axis=target if target < control else target - 1)
        return psi
    if gate.kind == GateKind.OPAQUE:
        if gate.permutation is None:
            raise CircuitValidationError(f"opaque gate '{gate.label}' has no simulated action")
        k = len(gate.qubits)
        moved = np.moveaxis(psi, gate.qubits, list(range(k)))
        flat = moved.reshape(1 << k, -1)
        out = np.empty_like(flat)
        out[np.array(gate.permutation)] = flat
        return np.moveaxis(out.reshape(moved.shape), list(range(k)), gate.qubits)
    (target,) = gate.qubits
    return np.moveaxis(np.tensordot(gate_matrix(gate), psi, axes=([1], [target])), 0, target)


def apply_layer(psi: np.ndarray, layer: QuantumLayer) -> np.ndarray:
    for gates in layer.slices:
        for gate in gates:
            psi = _apply_gate(psi, gate)
    return psi


def run_layered(
        circuit: LayeredCircuit,
        state: np.ndarray,
        rng: np.random.Generator,
        *,
        forced_outcomes: Optional[Sequence[Optional[int]]] = None,
) -> tuple[np.ndarray, list[MeasurementLog]]:
    """
    Execute a layered circuit on a dense r2-qubit input.

    Args:
        circuit: The circuit
        state: Input amplitudes of length 2^r2
        rng: Generator for measurement outcomes
        forced_outcomes: Per-measurement outcome index to post-select (None entries sample)

    Returns:
        tuple[np.ndarray, list[MeasurementLog]]: Output amplitudes on the persistent
        qubits and the measurement log
    """
    r1, r2 = circuit.r1, circuit.r2
    if circuit.total_qubits > settings.DENSE_QUBIT_LIMIT:
        raise SizeGuardError("run_layered", circuit.total_qubits, settings.DENSE_QUBIT_LIMIT)
    state = np.asarray(state, dtype=complex)
    if state.shape != (1 << r2,):
        raise ParameterError(f"input must have 2^{r2} amplitudes, got {state.shape}")
    validate_circuit(circuit)

    psi = np.zeros((1 << r1, 1 << r2), dtype=complex)
    psi[0] = state
    log: list[MeasurementLog] = []
    forced = list(forced_outcomes or [])
    ancilla_basis: Optional[int] = 0

    def measure(position: int) -> None:
        nonlocal psi, ancilla_basis
        flat = psi.reshape(1 << r1, 1 << r2)
        probs = (np.abs(flat) ** 2).sum(axis=1)
        choice = forced.pop(0) if forced else None
        if choice is None:
            choice = int(np.searchsorted(np.cumsum(probs), rng.random() * probs.sum(), side="right"))
            choice = min(choice, len(probs) - 1)
        if probs[choice] <= 1e-15:
            raise ParameterError(f"outcome {choice} has zero probability at layer {position}")
        kept = np.zeros_like(flat)
        kept[choice] = flat[choice] / math.sqrt(probs[choice])
        psi = kept
        ancilla_basis = choice
        bits = tuple((choice >> (r1 - 1 - i)) & 1 for i in range(r1))
        log.append(MeasurementLog(position, bits, float(probs[choice])))

    for position, layer in enumerate(circuit.layers):
        if isinstance(layer, QuantumLayer):
            tensor = psi.reshape([2] * (r1 + r2))
            psi = apply_layer(tensor, layer).reshape(1 << r1, 1 << r2)
            ancilla_basis = None
        elif isinstance(layer, Measure):
            measure(position)
        else:
            fresh = apply_correction(layer, log[-1].outcome)
            index = sum(bit << (r1 - 1 - i) for i, bit in enumerate(fresh))
            persistent = psi[ancilla_basis].copy()
            psi = np.zeros_like(psi)
            psi[index] = persistent
            ancilla_basis = index

    if ancilla_basis is None:
        measure(len(circuit.layers))
    return psi.reshape(1 << r1, 1 << r2)[ancilla_basis].copy(), log


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    return float(abs(np.vdot(a, b)) ** 2)
