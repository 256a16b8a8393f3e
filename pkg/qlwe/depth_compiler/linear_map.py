"""Modeled circuit for the coherent map |b, x, z> → |b, x, z + A'(b, x)>."""
from __future__ import annotations

import logging
from typing import Optional, Sequence

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import ParameterError
from qlwe.schemas.circuit import GateBasis, GateKind, GateOp, LayeredCircuit, QuantumLayer
from qlwe.zq_lattice.zq import ZqMatrix, bit_width

logger = logging.getLogger(__name__)


def register_qubits(n: int, m: int, q: int) -> int:
    """Qubits holding b, J(x) and J(z)."""
    return 1 + (n + m) * bit_width(q)


def encode_register(b: int, x: Sequence[int], z: Sequence[int], q: int) -> int:
    """Dense basis index of |b, J(x), J(z)>, qubit 0 most significant."""
    width = bit_width(q)
    bits = [b] + [(c >> j) & 1 for c in list(x) + list(z) for j in range(width)]
    return sum(bit << (len(bits) - 1 - i) for i, bit in enumerate(bits))


def decode_register(index: int, n: int, m: int, q: int) -> tuple[int, tuple[int, ...], tuple[int, ...]]:
    width = bit_width(q)
    total = register_qubits(n, m, q)
    bits = [(index >> (total - 1 - i)) & 1 for i in range(total)]
    coords = [sum(bits[1 + c * width + j] << j for j in range(width)) for c in range(n + m)]
    return bits[0], tuple(coords[:n]), tuple(coords[n:])


def linear_map_permutation(A_prime: ZqMatrix) -> list[int]:
    """Basis permutation of the map; patterns with a coordinate ≥ q are left fixed."""
    q = A_prime.q
    m, cols = A_prime.shape
    n = cols - 1
    width = bit_width(q)
    total = register_qubits(n, m, q)
    index = np.arange(1 << total, dtype=np.int64)

    def coordinate(c: int) -> np.ndarray:
        value = np.zeros_like(index)
        for j in range(width):
            value |= ((index >> (total - 1 - (1 + c * width + j))) & 1) << j
        return value

    b = (index >> (total - 1)) & 1
    coords = np.stack([coordinate(c) for c in range(n + m)], axis=1)
    valid = (coords < q).all(axis=1)
    inputs = np.column_stack([b, coords[:, :n]])
    entries = np.asarray(A_prime.entries, dtype=np.int64)
    z = (coords[:, n:] + inputs.dot(entries.T)) % q

    image = index & ~np.int64((1 << (m * width)) - 1)
    for c in range(m):
        for j in range(width):
            image |= ((z[:, c] >> j) & 1) << (m * width - 1 - (c * width + j))
    return np.where(valid, image, index).tolist()


def compile_linear_map_modeled(A_prime: ZqMatrix, q: Optional[int] = None) -> LayeredCircuit:
    """
    One modeled layer holding an opaque gate for the map, with its declared depth and error.

    The gate carries a simulable permutation only while the register fits the dense limit.
    """
    if q is not None and q != A_prime.q:
        raise ParameterError(f"modulus {q} does not match the matrix modulus {A_prime.q}")
    q = A_prime.q
    m, cols = A_prime.shape
    n = cols - 1
    if n < 0 or m < 1:
        raise ParameterError(f"A' must be m×(n+1) with m ≥ 1, got {A_prime.shape}")
    total = register_qubits(n, m, q)
    permutation = linear_map_permutation(A_prime) if total <= settings.DENSE_QUBIT_LIMIT else None
    gate = GateOp(
        kind=GateKind.OPAQUE,
        qubits=list(range(total)),
        label=f"add A'(b,x) into z, {m}x{n + 1} mod {q}",
        declared_depth=settings.LINEAR_MAP_DECLARED_DEPTH,
        declared_error=settings.LINEAR_MAP_DECLARED_ERROR,
        permutation=permutation,
    )
    layer = QuantumLayer(slices=[[gate]], declared_depth=settings.LINEAR_MAP_DECLARED_DEPTH)
    if permutation is None:
        logger.info("linear map on %d qubits exceeds the dense limit; compiled structurally only", total)
    return LayeredCircuit(
        r1=0, r2=total, basis=GateBasis.MODELED, family=f"linear_map(n={n}, m={m}, q={q})", layers=[layer]
    )
