import math

import numpy as np
import pytest

from qlwe.core.exceptions import ParameterError
from qlwe.depth_compiler.executor import fidelity, run_layered, validate_circuit
from qlwe.depth_compiler.fanout import compile_fanout, fanout_ancillas, reference_fanout
from qlwe.depth_compiler.report import depth_report
from qlwe.schemas.circuit import GateBasis


def random_state(rng, qubits: int) -> np.ndarray:
    psi = rng.normal(size=1 << qubits) + 1j * rng.normal(size=1 << qubits)
    return psi / np.linalg.norm(psi)


def test_single_qubit_fanout_is_empty():
    circuit = compile_fanout(1)
    assert circuit.r1 == 0
    assert circuit.r2 == 1
    assert circuit.quantum_layers() == []


def test_two_qubit_fanout_acts_as_cnot(rng):
    circuit = compile_fanout(2)
    assert circuit.r1 == 1
    for index in range(4):
        psi = np.zeros(4, dtype=complex)
        psi[index] = 1
        for outcome in range(2):
            out, _ = run_layered(circuit, psi, rng, forced_outcomes=[outcome])
            image = index ^ 1 if index >> 1 else index
            assert abs(out[image]) == pytest.approx(1.0)


def test_fanout_rejects_empty_register():
    with pytest.raises(ParameterError):
        compile_fanout(0)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_fanout_matches_reference_on_every_branch(m, rng):
    circuit = compile_fanout(m)
    psi = random_state(rng, m)
    expected = reference_fanout(m, psi)
    for outcome in range(1 << circuit.r1):
        out, log = run_layered(circuit, psi, rng, forced_outcomes=[outcome])
        assert fidelity(out, expected) >= 1 - 1e-9
        assert log[0].probability == pytest.approx(2.0 ** -circuit.r1)


@pytest.mark.parametrize("m", [1, 2, 6])
def test_fanout_matches_reference_on_sampled_branches(m, rng):
    circuit = compile_fanout(m)
    for _ in range(5):
        psi = random_state(rng, m)
        out, _ = run_layered(circuit, psi, rng)
        assert fidelity(out, reference_fanout(m, psi)) >= 1 - 1e-9


def test_fanout_on_basis_states():
    m = 4
    circuit = compile_fanout(m)
    rng = np.random.default_rng(3)
    for index in range(1 << m):
        psi = np.zeros(1 << m, dtype=complex)
        psi[index] = 1
        out, _ = run_layered(circuit, psi, rng)
        x1 = index >> (m - 1)
        image = index ^ (((1 << (m - 1)) - 1) if x1 else 0)
        assert abs(out[image]) == pytest.approx(1.0)


@pytest.mark.parametrize("m", range(2, 65))
def test_fanout_uses_one_ancilla_per_target_at_constant_depth(m):
    circuit = compile_fanout(m)
    validate_circuit(circuit)
    report = depth_report(circuit)
    assert circuit.basis == GateBasis.B_R
    assert circuit.r1 == fanout_ancillas(m) == m - 1
    assert report.num_layers <= 2
    assert all(depth <= 4 for depth in report.layer_depths)
    assert report.max_classical_depth <= math.ceil(math.log2(m)) + 1
    assert set(report.gate_counts) == {"H", "CNOT"}


def test_fanout_spreads_leading_one_over_five_qubits(rng):
    circuit = compile_fanout(5)
    psi = np.zeros(32, dtype=complex)
    psi[0b10000] = 1
    for outcome in range(1 << circuit.r1):
        out, _ = run_layered(circuit, psi, rng, forced_outcomes=[outcome])
        assert abs(out[0b11111]) == pytest.approx(1.0)


def test_fanout_checks_hold_prefix_parities():
    circuit = compile_fanout(7)
    k = 3
    feedback = circuit.corrections()[0].matrix_gf2
    for i in range(k):
        assert feedback[k + i][k:2 * k] == [1] * (i + 1) + [0] * (k - i - 1)
    assert feedback[0][:k] == [1] * k


def test_reference_fanout_is_a_cnot_ladder():
    psi = np.zeros(8, dtype=complex)
    psi[0b100] = 1
    out = reference_fanout(3, psi)
    assert abs(out[0b111]) == pytest.approx(1.0)
