import itertools

import numpy as np
import pytest
from pydantic import ValidationError

from qlwe.core.config import settings
from qlwe.core.exceptions import CircuitValidationError, SizeGuardError
from qlwe.depth_compiler.executor import classical_depth, critical_path, run_layered, validate_circuit
from qlwe.depth_compiler.linear_map import (
    compile_linear_map_modeled,
    decode_register,
    encode_register,
    register_qubits,
)
from qlwe.depth_compiler.report import depth_report
from qlwe.quantum_sim.lwe_map import apply_lwe_map, lwe_map_matrix
from qlwe.quantum_sim.state import SparseState
from qlwe.schemas.circuit import (
    ClassicalCorrection,
    GateBasis,
    GateKind,
    GateOp,
    LayeredCircuit,
    Measure,
    QuantumLayer,
)
from qlwe.zq_lattice.validation import LweInstance
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector


def cnot(c, t):
    return GateOp(kind=GateKind.CNOT, qubits=[c, t])


def h(t):
    return GateOp(kind=GateKind.H, qubits=[t])


@pytest.fixture
def small_instance() -> LweInstance:
    A = ZqMatrix.from_rows([[1], [3]], 4)
    s, e = ZqVector(4, (2,)), ZqVector(4, (1, 0))
    return LweInstance(A=A, u=A.mul_vec(s) + e, s_witness=s, e_witness=e)


def test_critical_path_follows_shared_qubits():
    layer = QuantumLayer(slices=[[h(0)], [cnot(0, 1)], [h(2)], [cnot(1, 2)]])
    assert critical_path(layer) == 3


def test_classical_depth_uses_row_weights():
    correction = ClassicalCorrection(matrix_gf2=[[1, 1, 1, 1, 1], [0, 1, 0, 0, 0], [0] * 5, [0] * 5, [0] * 5])
    assert classical_depth(correction) == 3


@pytest.mark.parametrize(
    "layers, r1, message",
    [
        ([QuantumLayer(slices=[[h(0), cnot(0, 1)]], declared_depth=1)], 0, "share"),
        ([QuantumLayer(slices=[[h(0)], [h(0)]], declared_depth=1)], 0, "critical path"),
        ([QuantumLayer(slices=[[cnot(0, 5)]], declared_depth=1)], 0, "out of range"),
        ([ClassicalCorrection(matrix_gf2=[[1]])], 1, "follow a measurement"),
        ([Measure(), ClassicalCorrection(matrix_gf2=[[1, 0]])], 1, "1x1"),
    ],
)
def test_validation_rejects_malformed_circuits(layers, r1, message):
    circuit = LayeredCircuit(r1=r1, r2=2, layers=layers)
    with pytest.raises(CircuitValidationError, match=message):
        validate_circuit(circuit)


def test_basis_membership_is_enforced():
    layer = QuantumLayer(slices=[[GateOp(kind=GateKind.S, qubits=[0])]], declared_depth=1)
    with pytest.raises(CircuitValidationError, match="outside basis"):
        validate_circuit(LayeredCircuit(r1=0, r2=1, basis=GateBasis.B_R, layers=[layer]))
    validate_circuit(LayeredCircuit(r1=0, r2=1, basis=GateBasis.B, layers=[layer]))


def test_unitarity_is_checked():
    bad = GateOp(kind=GateKind.UNITARY, qubits=[0], matrix=[[[1, 0], [1, 0]], [[0, 0], [1, 0]]])
    layer = QuantumLayer(slices=[[bad]], declared_depth=1)
    with pytest.raises(CircuitValidationError, match="unitary"):
        validate_circuit(LayeredCircuit(r1=0, r2=1, basis=GateBasis.B, layers=[layer]))


def test_gate_schema_rejects_bad_arity():
    with pytest.raises(ValidationError):
        GateOp(kind=GateKind.CNOT, qubits=[0])
    with pytest.raises(ValidationError):
        GateOp(kind=GateKind.H, qubits=[0], declared_depth=2)


def test_compact_layers_are_sliced_and_tagged():
    circuit = LayeredCircuit.model_validate(
        {
            "r1": 2,
            "r2": 2,
            "layers": [
                {"gates": [{"gate": "H", "qubits": [0]}, {"gate": "H", "qubits": [2]},
                           {"gate": "CNOT", "qubits": [0, 1]}, {"gate": "CNOT", "qubits": [1, 3]}]},
                {"measure": True},
                {"correction": {"matrix_gf2": [[1, 1], [0, 1]]}},
            ],
        }
    )
    quantum, measure, correction = circuit.layers
    assert isinstance(quantum, QuantumLayer)
    assert [[g.kind for g in s] for s in quantum.slices] == [
        [GateKind.H, GateKind.H], [GateKind.CNOT], [GateKind.CNOT]
    ]
    assert quantum.declared_depth == 3
    assert isinstance(measure, Measure)
    assert isinstance(correction, ClassicalCorrection)
    assert correction.declared_depth == 1
    validate_circuit(circuit)


def test_compact_layer_keeps_an_explicit_depth():
    layer = LayeredCircuit.model_validate(
        {"r1": 0, "r2": 2, "layers": [{"gates": [{"gate": "H", "qubits": [0]}], "declared_depth": 2}]}
    ).layers[0]
    assert layer.declared_depth == 2
    with pytest.raises(CircuitValidationError, match="critical path"):
        validate_circuit(LayeredCircuit(r1=0, r2=2, layers=[layer]))


def test_unrecognized_layer_shape_is_rejected():
    with pytest.raises(ValidationError):
        LayeredCircuit.model_validate({"r1": 0, "r2": 1, "layers": [{"measure": False}]})


def test_measure_and_correct_reinitializes_ancillas(rng):
    # ancilla copies the data bit, is measured, then reset to zero
    circuit = LayeredCircuit(
        r1=1, r2=1,
        layers=[
            QuantumLayer(slices=[[cnot(1, 0)]], declared_depth=1),
            Measure(),
            ClassicalCorrection(matrix_gf2=[[0]]),
        ],
    )
    psi = np.array([1, 1j]) / np.sqrt(2)
    counts = {0: 0, 1: 0}
    for _ in range(200):
        out, log = run_layered(circuit, psi, rng)
        (bit,) = log[0].outcome
        counts[bit] += 1
        assert abs(out[bit]) == pytest.approx(1.0)
    assert min(counts.values()) > 50


def test_register_encoding_is_invertible():
    for b, x, z1, z2 in itertools.product((0, 1), range(4), range(4), range(4)):
        index = encode_register(b, (x,), (z1, z2), 4)
        assert decode_register(index, 1, 2, 4) == (b, (x,), (z1, z2))


def test_linear_map_matches_the_sparse_map_on_basis_states(small_instance, rng):
    k = small_instance
    circuit = compile_linear_map_modeled(lwe_map_matrix(k), 4)
    assert circuit.r2 == register_qubits(1, 2, 4) == 7
    for b, x, z1, z2 in itertools.product((0, 1), range(4), range(4), range(4)):
        psi = np.zeros(1 << circuit.r2, dtype=complex)
        psi[encode_register(b, (x,), (z1, z2), 4)] = 1
        out, _ = run_layered(circuit, psi, rng)
        (expected,) = list(apply_lwe_map(SparseState.basis_state(4, (1, 1, 2), (b, x, z1, z2)), k))
        assert abs(out[encode_register(expected[0], expected[1:2], expected[2:], 4)]) == pytest.approx(1.0)


def test_linear_map_on_a_superposition(small_instance, rng):
    k = small_instance
    circuit = compile_linear_map_modeled(lwe_map_matrix(k))
    keys = [(b, x, 0, 0) for b in (0, 1) for x in range(4)]
    amps = rng.normal(size=len(keys))
    state = SparseState.normalized(4, (1, 1, 2), dict(zip(keys, amps)))
    psi = np.zeros(1 << circuit.r2, dtype=complex)
    for key, amp in state.items():
        psi[encode_register(key[0], key[1:2], key[2:], 4)] = amp
    out, _ = run_layered(circuit, psi, rng)
    for key, amp in apply_lwe_map(state, k).items():
        assert out[encode_register(key[0], key[1:2], key[2:], 4)] == pytest.approx(amp)


def test_linear_map_report_uses_declared_figures():
    A_prime = ZqMatrix.uniform(8, 5, 16, np.random.default_rng(1))
    circuit = compile_linear_map_modeled(A_prime)
    validate_circuit(circuit)
    report = depth_report(circuit)
    assert report.num_layers == 1
    assert report.max_quantum_depth == settings.LINEAR_MAP_DECLARED_DEPTH
    assert report.r1 == 0
    assert report.gate_counts == {"OPAQUE": 1}
    gate = circuit.quantum_layers()[0].slices[0][0]
    assert gate.permutation is None


def test_opaque_gate_without_action_cannot_run(rng):
    gate = GateOp(kind=GateKind.OPAQUE, qubits=[0, 1], label="oracle")
    circuit = LayeredCircuit(
        r1=0, r2=2, basis=GateBasis.MODELED, layers=[QuantumLayer(slices=[[gate]], declared_depth=1)]
    )
    with pytest.raises(CircuitValidationError, match="no simulated action"):
        run_layered(circuit, np.eye(4)[0], rng)


def test_dense_guard_on_execution(rng):
    circuit = LayeredCircuit(r1=0, r2=settings.DENSE_QUBIT_LIMIT + 1)
    with pytest.raises(SizeGuardError):
        run_layered(circuit, np.zeros(2), rng)
