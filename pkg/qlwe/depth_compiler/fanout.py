"""Constant-depth fanout with mid-circuit measurement and GF(2) feedback.

For m data qubits the circuit uses m - 1 ancillas: copies c_1..c_K, then
checks p_1..p_K, then (m even) one direct copy a of d_1, where K = (m-1)//2.
Copy c_i is a fresh |+> whose random bit r_i is fed to the target pair
u_i = d_{2i}, v_i = d_{2i+1}. Check p_i reads each neighbouring target once
before and once after its feed, so the data cancels and p_i ends holding
r_{i-1} ⊕ r_i (p_1 holds d_1 ⊕ r_1). Measuring the checks pins every r_i to
d_1 ⊕ (prefix parity of check outcomes); copies are measured in the X basis
and their outcome parity becomes a Z fix-up on d_1.
"""
from __future__ import annotations

import logging

import numpy as np

from qlwe.core.exceptions import ParameterError
from qlwe.depth_compiler.executor import apply_layer, classical_depth, critical_path
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


def _cnot(control: int, target: int) -> GateOp:
    return GateOp(kind=GateKind.CNOT, qubits=[control, target])


def _h(target: int) -> GateOp:
    return GateOp(kind=GateKind.H, qubits=[target])


def _layer(slices: list[list[GateOp]]) -> QuantumLayer:
    layer = QuantumLayer(slices=[s for s in slices if s])
    layer.declared_depth = critical_path(layer)
    return layer


def _correction(matrix: list[list[int]]) -> ClassicalCorrection:
    correction = ClassicalCorrection(matrix_gf2=matrix)
    correction.declared_depth = classical_depth(correction)
    return correction


def fanout_ancillas(m: int) -> int:
    return max(m - 1, 0)


def compile_fanout(m: int) -> LayeredCircuit:
    """Layered circuit mapping |x1, x2..xm> to |x1, x2⊕x1, .., xm⊕x1> with two depth-4 layers."""
    if m < 1:
        raise ParameterError(f"fanout needs m ≥ 1, got {m}")
    family = f"fanout(m={m})"
    if m == 1:
        return LayeredCircuit(r1=0, r2=1, basis=GateBasis.B_R, family=family)

    r1 = fanout_ancillas(m)
    k = (m - 1) // 2
    copy = list(range(k))
    check = [k + i for i in range(k)]
    direct = 2 * k if m % 2 == 0 else None
    data = [r1 + j for j in range(m)]
    d1 = data[0]
    u = [data[2 * i + 1] for i in range(k)]
    v = [data[2 * i + 2] for i in range(k)]

    # slice-by-slice: reads of u happen around its feed in slice 2, reads of v around slice 3
    s1 = [_h(c) for c in copy]
    s2 = [_cnot(copy[i], u[i]) for i in range(k)] + [_cnot(v[i], check[i]) for i in range(k)]
    s3 = [_cnot(copy[i], v[i]) for i in range(k)]
    s4 = [_cnot(v[i], check[i]) for i in range(k)] + [_h(c) for c in copy]
    if k:
        s1.append(_cnot(d1, check[0]))
    for i in range(1, k):
        s1.append(_cnot(u[i - 1], check[i]))
        s3.append(_cnot(u[i - 1], check[i]))
    if direct is not None:
        s2.append(_cnot(d1, direct))
        s3.append(_cnot(direct, data[-1]))
        s4.append(_h(direct))
    first = _layer([s1, s2, s3, s4])

    # row 0 collects the X-basis outcome parity, row p_i the prefix parity of checks
    z_row = 0
    feedback = [[0] * r1 for _ in range(r1)]
    for c in copy:
        feedback[z_row][c] = 1
    if direct is not None:
        feedback[z_row][direct] = 1
    for i in range(k):
        for j in range(i + 1):
            feedback[check[i]][check[j]] = 1

    second = _layer([
        [_cnot(check[i], u[i]) for i in range(k)] + [_h(d1)],
        [_cnot(check[i], v[i]) for i in range(k)] + [_cnot(z_row, d1)],
        [_h(d1)],
    ])

    circuit = LayeredCircuit(
        r1=r1,
        r2=m,
        basis=GateBasis.B_R,
        family=family,
        layers=[first, Measure(), _correction(feedback), second, Measure(), _correction([[0] * r1 for _ in range(r1)])],
    )
    logger.debug("compiled %s with r1=%d depths=%s", family, r1, [l.declared_depth for l in circuit.quantum_layers()])
    return circuit


def reference_fanout(m: int, state: np.ndarray) -> np.ndarray:
    """Apply the CNOT ladder d_1 → d_j, j = 2..m, to a dense m-qubit state."""
    if m < 1:
        raise ParameterError(f"fanout needs m ≥ 1, got {m}")
    state = np.asarray(state, dtype=complex)
    if state.shape != (1 << m,):
        raise ParameterError(f"state must have 2^{m} amplitudes")
    ladder = QuantumLayer(slices=[[_cnot(0, j)] for j in range(1, m)])
    return apply_layer(state.reshape([2] * m), ladder).reshape(-1)
