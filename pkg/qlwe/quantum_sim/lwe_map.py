"""The LWE map |b,x,z⟩ → |b,x,z + A·x + b·u⟩ and the prover's state |Φ⟩."""
from __future__ import annotations

import logging
import math

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import DimensionError, PreconditionViolation, ShapeMismatch, SizeGuardError
from qlwe.quantum_sim.robust import create_robust_state, closeness_precondition, uniform_q_superposition
from qlwe.quantum_sim.state import SparseState
from qlwe.schemas.params import ProtocolParams
from qlwe.zq_lattice.validation import LweInstance, validate_instance
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector, enumerate_domain

logger = logging.getLogger(__name__)


def lwe_map_matrix(k: LweInstance) -> ZqMatrix:
    """A' = [u | A], so that f_k(b, x) = A'·(b, x)."""
    return ZqMatrix(k.q, np.column_stack([k.u.array(), k.A.entries]))


def apply_lwe_map(state: SparseState, k: LweInstance) -> SparseState:
    if state.shape != (1, k.n, k.m) or state.q != k.q:
        raise ShapeMismatch(f"expected registers (1, {k.n}, {k.m}) mod {k.q}, got {state.shape} mod {state.q}")
    q, n = k.q, k.n
    u = k.u.coords
    images: dict[tuple[int, ...], tuple[int, ...]] = {}
    out = {}
    for key, amp in state.items():
        b, x, z = key[0], key[1:1 + n], key[1 + n:]
        ax = images.get(x)
        if ax is None:
            ax = images[x] = k.A.mul_vec(ZqVector(q, x)).coords
        out[(b,) + x + tuple((zi + ai + b * ui) % q for zi, ai, ui in zip(z, ax, u))] = amp
    return SparseState(q, state.shape, out)


def _check_dims(k: LweInstance, params: ProtocolParams) -> None:
    if (k.n, k.m, k.q) != (params.n, params.m, params.q):
        raise DimensionError(
            f"instance (n={k.n}, m={k.m}, q={k.q}) does not match parameters "
            f"(n={params.n}, m={params.m}, q={params.q})"
        )


def phi_support_size(params: ProtocolParams) -> int:
    return 2 * params.q ** params.n * 2 ** (params.m * params.r)


def _build(k: LweInstance, params: ProtocolParams) -> tuple[SparseState, float]:
    size = phi_support_size(params)
    if size > settings.SPARSE_SUPPORT_LIMIT:
        raise SizeGuardError("prepare_Phi", size, settings.SPARSE_SUPPORT_LIMIT)
    bit = SparseState(k.q, (1, 0, 0), {(0,): 1 / math.sqrt(2), (1,): 1 / math.sqrt(2)})
    xs, budget = uniform_q_superposition(k.q, k.n)
    phi = create_robust_state(k.m, k.q, params.r)
    return apply_lwe_map(bit.tensor(xs).tensor(phi), k), budget


def prepare_Phi(
        k: LweInstance, params: ProtocolParams, *, override: bool = False
) -> tuple[SparseState, float]:
    """
    Build |Φ⟩ = Σ α_z/√(2qⁿ) |b, x, z + f_k(b, x)⟩.

    Args:
        k: The instance
        params: Parameters supplying r, B_V, C and ε
        override: Continue when the instance is outside K_{B_V} or q is below
            the closeness threshold

    Returns:
        tuple[SparseState, float]: The state and its error budget n/q²
    """
    _check_dims(k, params)
    problems = validate_instance(k, params).failures
    if not closeness_precondition(params).holds:
        problems.append("closeness_modulus")
    if problems:
        if not override:
            raise PreconditionViolation(f"prepare_Phi preconditions fail: {', '.join(problems)}")
        logger.warning("prepare_Phi running with failed preconditions: %s", ", ".join(problems))
    return _build(k, params)


def prepare_Phi_shift_corrected(
        k: LweInstance, params: ProtocolParams, *, override: bool = False
) -> tuple[SparseState, float]:
    """|Φ′⟩: the same construction with u replaced by A·s."""
    if k.s_witness is None:
        raise PreconditionViolation("the shift-corrected state needs the secret witness")
    _check_dims(k, params)
    exact = LweInstance(
        A=k.A, u=k.A.mul_vec(k.s_witness), s_witness=k.s_witness,
        e_witness=ZqVector.zeros(k.m, k.q), validated_distance=k.validated_distance,
    )
    return prepare_Phi(exact, params, override=override)


def shifted_supports_disjoint(k: LweInstance, r: int) -> bool:
    """
    Whether the supports {z + A·x : z ∈ I^m} are pairwise disjoint over x.

    Two supports meet exactly when some nonzero A·δ has every centered
    coordinate within 2^r − 1.
    """
    q, n = k.q, k.n
    reach = (1 << r) - 1
    if 2 * reach + 1 >= q:
        return q ** n == 1
    if q ** n > settings.ENUMERATION_LIMIT:
        raise SizeGuardError("shifted_supports_disjoint", q ** n, settings.ENUMERATION_LIMIT)
    for deltas in enumerate_domain(n, q):
        images = np.mod(k.A.mul_many(deltas), q)
        centered = np.where(images > q // 2, images - q, images)
        close = (np.abs(centered) <= reach).all(axis=1) & deltas.any(axis=1)
        if close.any():
            return False
    return True
