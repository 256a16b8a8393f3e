from collections import Counter

from qlwe.depth_compiler.executor import classical_depth, critical_path
from qlwe.schemas.circuit import DepthReport, LayeredCircuit


def depth_report(circuit: LayeredCircuit) -> DepthReport:
    layers = circuit.quantum_layers()
    depths = [critical_path(layer) for layer in layers]
    gates = [gate for layer in layers for s in layer.slices for gate in s]
    return DepthReport(
        family=circuit.family,
        num_layers=len(layers),
        layer_depths=depths,
        max_quantum_depth=max(depths, default=0),
        max_classical_depth=max((classical_depth(c) for c in circuit.corrections()), default=0),
        r1=circuit.r1,
        r2=circuit.r2,
        total_qubits=circuit.total_qubits,
        gate_counts=dict(Counter(gate.kind.value for gate in gates)),
        declared_error=sum(gate.declared_error for gate in gates),
    )
