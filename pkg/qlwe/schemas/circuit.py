import math
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Discriminator, Field, Tag, model_validator


class GateKind(str, Enum):
    """Enumeration of gate kinds"""
    H = "H"
    T = "T"
    S = "S"
    X = "X"
    Z = "Z"
    UNITARY = "U"
    CNOT = "CNOT"
    OPAQUE = "OPAQUE"


class GateBasis(str, Enum):
    """Gate sets a circuit may declare"""
    B_R = "B_r"            # {H, T, CNOT}
    B = "B"                # every 1-qubit gate and CNOT
    MODELED = "B+opaque"   # B plus opaque layer-gates


class GateOp(BaseModel):
    """One gate; qubits are (target) for 1-qubit gates and (control, target) for CNOT"""
    kind: GateKind
    qubits: List[int] = Field(..., min_length=1)
    matrix: Optional[List[List[List[float]]]] = Field(
        None, description="2×2 unitary for kind U, entries as [re, im]"
    )
    label: Optional[str] = None
    declared_depth: int = Field(1, ge=1)
    declared_error: float = Field(0.0, ge=0)
    permutation: Optional[List[int]] = Field(
        None, description="Basis permutation over the gate's qubits, first qubit most significant"
    )

    @model_validator(mode="before")
    @classmethod
    def accept_gate_name(cls, data: Any) -> Any:
        if isinstance(data, dict) and "kind" not in data and "gate" in data:
            data = {**data, "kind": data["gate"]}
            data.pop("gate")
        return data

    @model_validator(mode="after")
    def check_arity(self):
        if self.kind == GateKind.CNOT and len(self.qubits) != 2:
            raise ValueError("CNOT acts on (control, target)")
        if self.kind not in (GateKind.CNOT, GateKind.OPAQUE) and len(self.qubits) != 1:
            raise ValueError(f"{self.kind.value} acts on one qubit")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("gate qubits must be distinct")
        if self.kind == GateKind.UNITARY and self.matrix is None:
            raise ValueError("kind U needs a matrix")
        if self.kind == GateKind.OPAQUE:
            if not self.label:
                raise ValueError("opaque gates need a label")
            if self.permutation is not None and sorted(self.permutation) != list(range(1 << len(self.qubits))):
                raise ValueError("opaque permutation must be a permutation of the gate's basis")
        elif self.declared_depth != 1:
            raise ValueError("only opaque gates declare a depth")
        return self


class QuantumLayer(BaseModel):
    """Constant-depth unitary layer as a list of depth slices"""
    kind: Literal["quantum"] = "quantum"
    slices: List[List[GateOp]] = Field(default_factory=list)
    declared_depth: int = Field(0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def slice_flat_gates(cls, data: Any) -> Any:
        """A flat {"gates": [...]} list is packed into ASAP slices and, unless given, declares its critical path."""
        if not isinstance(data, dict) or "gates" not in data or "slices" in data:
            return data
        ready: Dict[int, int] = {}
        slices: List[list] = []
        end = 0
        for gate in data["gates"]:
            spec = gate if isinstance(gate, dict) else gate.model_dump()
            qubits = spec.get("qubits")
            if not (isinstance(qubits, list) and all(isinstance(q, int) for q in qubits)):
                qubits = []
            weight = spec.get("declared_depth", 1)
            start = max((ready.get(q, 0) for q in qubits), default=0)
            while len(slices) <= start:
                slices.append([])
            slices[start].append(gate)
            finish = start + (weight if isinstance(weight, int) else 1)
            ready.update((q, finish) for q in qubits)
            end = max(end, finish)
        out = {k: v for k, v in data.items() if k != "gates"}
        out["slices"] = [s for s in slices if s]
        out.setdefault("declared_depth", end)
        return out

    def critical_path(self) -> int:
        """ASAP depth of the gates in slice order; opaque gates weigh their declared depth."""
        ready: Dict[int, int] = {}
        depth = 0
        for gates in self.slices:
            for gate in gates:
                start = max((ready.get(q, 0) for q in gate.qubits), default=0)
                end = start + gate.declared_depth
                for q in gate.qubits:
                    ready[q] = end
                depth = max(depth, end)
        return depth


class Measure(BaseModel):
    """Measure the first r1 qubits in the computational basis"""
    kind: Literal["measure"] = "measure"


class ClassicalCorrection(BaseModel):
    """Affine GF(2) map f(a) = M·a ⊕ offset applied to the measured r1 bits"""
    kind: Literal["correction"] = "correction"
    matrix_gf2: List[List[int]] = Field(default_factory=list)
    offset: Optional[List[int]] = None
    declared_depth: int = Field(0, ge=0)

    @model_validator(mode="before")
    @classmethod
    def unwrap_correction(cls, data: Any) -> Any:
        if isinstance(data, dict) and isinstance(data.get("correction"), dict):
            out = dict(data["correction"])
            if "declared_depth" not in out:
                try:
                    out["declared_depth"] = _xor_tree_depth(out.get("matrix_gf2", []))
                except TypeError:
                    pass
            return out
        return data

    def xor_depth(self) -> int:
        return _xor_tree_depth(self.matrix_gf2)


def _xor_tree_depth(matrix: List[List[int]]) -> int:
    """Depth of fan-in-2 XOR trees computing every output bit."""
    weights = [sum(row) for row in matrix]
    return max((math.ceil(math.log2(w)) for w in weights if w > 1), default=0)


def _layer_tag(value: Any) -> Optional[str]:
    """Tag a layer by its `kind`, or by the key of the compact {"gates"}/{"measure"}/{"correction"} shape."""
    if not isinstance(value, dict):
        return getattr(value, "kind", None)
    if "kind" in value:
        return value["kind"]
    if "gates" in value or "slices" in value:
        return "quantum"
    if value.get("measure") is True:
        return "measure"
    if "correction" in value:
        return "correction"
    return None


Layer = Annotated[
    Union[
        Annotated[QuantumLayer, Tag("quantum")],
        Annotated[Measure, Tag("measure")],
        Annotated[ClassicalCorrection, Tag("correction")],
    ],
    Discriminator(_layer_tag),
]


class LayeredCircuit(BaseModel):
    """A circuit of the class C(S, r1, r2): ancillas 0..r1−1, persistent qubits after them"""
    r1: int = Field(..., ge=0, description="Measured-and-reinitialized qubits")
    r2: int = Field(..., ge=0, description="Persistent qubits")
    basis: GateBasis = GateBasis.B_R
    family: str = Field("", description="Circuit family descriptor")
    layers: List[Layer] = Field(default_factory=list)

    @property
    def total_qubits(self) -> int:
        return self.r1 + self.r2

    def quantum_layers(self) -> List[QuantumLayer]:
        return [layer for layer in self.layers if isinstance(layer, QuantumLayer)]

    def corrections(self) -> List[ClassicalCorrection]:
        return [layer for layer in self.layers if isinstance(layer, ClassicalCorrection)]


class DepthReport(BaseModel):
    """Structural depth figures of a layered circuit"""
    family: str
    num_layers: int = Field(..., description="Quantum layers")
    layer_depths: List[int]
    max_quantum_depth: int
    max_classical_depth: int
    r1: int
    r2: int
    total_qubits: int
    gate_counts: Dict[str, int]
    declared_error: float = 0.0
