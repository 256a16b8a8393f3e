"""Gadget trapdoor generation, inversion and brute-force oracles.

GENTRAP stacks a uniform block on top of a gadget block::

    A = [ Ā          ]   Ā uniform in Z_q^{m̄×n}
        [ G − R·Ā    ]   G = I_n ⊗ (1, 2, …, 2^{k−1})ᵀ, R uniform in {±1}^{nk×m̄}

so that [R | I]·A = G. INVERT multiplies v = A·x + e by [R | I] and decodes the
gadget code coordinate by coordinate; it succeeds whenever ‖[R | I]·e‖∞ stays
below the gadget's unique-decoding radius.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import (
    AmbiguousPreimage,
    DimensionError,
    InversionFailed,
    ParameterError,
    SizeGuardError,
)
from qlwe.schemas.lattice import KeypairPayload, TrapdoorPayload
from qlwe.zq_lattice.zq import (
    ZqMatrix,
    ZqVector,
    bit_width,
    centered_array,
    enumerate_domain,
    matrix_from_payload,
    matrix_payload,
)

logger = logging.getLogger(__name__)

# Largest non-power-of-two modulus decoded by exhaustive search per coordinate
_SEARCH_DECODE_LIMIT = 1 << 16


def _is_power_of_two(q: int) -> bool:
    return q & (q - 1) == 0


def gadget_matrix(n: int, q: int) -> np.ndarray:
    k = bit_width(q)
    g = np.array([pow(2, j, q) for j in range(k)], dtype=np.int64).reshape(k, 1)
    return np.kron(np.eye(n, dtype=np.int64), g)


@dataclass(frozen=True, eq=False)
class GadgetTrapdoor:
    m_bar: int
    width: int
    R: np.ndarray = field(repr=False)

    def row_norm(self) -> float:
        """Euclidean norm of every row of [R | I]."""
        return math.sqrt(self.m_bar + 1)

    @staticmethod
    def infinity_radius(q: int) -> float:
        """Per-entry decoding radius of the gadget code."""
        return q / 4 if _is_power_of_two(q) else q / 8

    def decoding_radius(self, q: int) -> float:
        """Any e with ‖e‖ below this is corrected by ``invert``."""
        return self.infinity_radius(q) / self.row_norm()

    def implied_constant(self, n: int, q: int) -> float:
        """The C for which q/(C√(n log₂ q)) equals the decoding radius."""
        return q / (self.decoding_radius(q) * math.sqrt(n * math.log2(q)))


@dataclass(frozen=True)
class TrapdoorKeypair:
    A: ZqMatrix
    trapdoor: Optional[GadgetTrapdoor] = None

    @property
    def q(self) -> int:
        return self.A.q

    @property
    def m(self) -> int:
        return self.A.rows

    @property
    def n(self) -> int:
        return self.A.cols


def min_gadget_rows(n: int, q: int) -> int:
    return n * bit_width(q) + n


def gentrap(n: int, m: int, q: int, rng: np.random.Generator) -> TrapdoorKeypair:
    """Sample A ∈ Z_q^{m×n} with a gadget trapdoor."""
    k = bit_width(q)
    if n < 1 or m < min_gadget_rows(n, q):
        raise DimensionError(f"gadget construction needs m >= n*ceil(log2 q) + n = {min_gadget_rows(n, q)}, got m={m}")
    m_bar = m - n * k
    A_bar = rng.integers(0, q, size=(m_bar, n), dtype=np.int64)
    R = rng.choice(np.array([-1, 1], dtype=np.int64), size=(n * k, m_bar))
    bottom = np.mod(gadget_matrix(n, q) - R.dot(A_bar), q)
    R.setflags(write=False)
    A = ZqMatrix(q, np.vstack([A_bar, bottom]))
    return TrapdoorKeypair(A=A, trapdoor=GadgetTrapdoor(m_bar=m_bar, width=k, R=R))


def _decode_power_of_two(w: np.ndarray, q: int) -> np.ndarray:
    n, k = w.shape
    x = np.zeros(n, dtype=np.int64)
    for t in range(k):
        j = k - 1 - t
        val = centered_array(w[:, j] - (1 << j) * x, q)
        bit = (4 * np.abs(val) > q).astype(np.int64)
        x += bit << t
    return x


def _decode_by_search(w: np.ndarray, q: int) -> np.ndarray:
    if q > _SEARCH_DECODE_LIMIT:
        raise ParameterError(f"exhaustive gadget decoding supports q <= {_SEARCH_DECODE_LIMIT}, got {q}")
    n, k = w.shape
    g = np.array([pow(2, j, q) for j in range(k)], dtype=np.int64)
    codewords = np.mod(np.outer(np.arange(q, dtype=np.int64), g), q)
    x = np.empty(n, dtype=np.int64)
    for i in range(n):
        score = np.abs(centered_array(w[i] - codewords, q)).max(axis=1)
        x[i] = int(np.argmin(score))
    return x


def invert(A: ZqMatrix, t: GadgetTrapdoor, v: ZqVector) -> ZqVector:
    """Recover x from v = A·x + e when e is within the trapdoor's decoding radius."""
    q, (m, n) = A.q, A.shape
    if len(v) != m or v.q != q:
        raise DimensionError(f"expected a vector of length {m} mod {q}, got length {len(v)} mod {v.q}")
    if t.R.shape != (n * t.width, t.m_bar) or t.m_bar + n * t.width != m:
        raise DimensionError("trapdoor does not match the matrix dimensions")
    vec = np.array(v.coords, dtype=np.int64)
    w = np.mod(t.R.dot(vec[:t.m_bar]) + vec[t.m_bar:], q).reshape(n, t.width)
    x = _decode_power_of_two(w, q) if _is_power_of_two(q) else _decode_by_search(w, q)
    residual = centered_array(w - np.mod(gadget_matrix(n, q).dot(x), q).reshape(n, t.width), q)
    if np.abs(residual).max(initial=0) >= t.infinity_radius(q):
        raise InversionFailed(f"gadget residual {int(np.abs(residual).max())} exceeds decoding radius")
    return ZqVector(q, tuple(int(c) for c in x))


def residual_norm(A: ZqMatrix, x: ZqVector, v: ZqVector) -> float:
    """‖A·x − v‖ over centered representatives."""
    return (A.mul_vec(x) - v).norm()


def _check_enumerable(guard: str, n: int, q: int, limit: Optional[int]) -> None:
    limit = settings.ENUMERATION_LIMIT if limit is None else limit
    if q ** n > limit:
        raise SizeGuardError(guard, q ** n, limit)


def invert_bruteforce(
        A: ZqMatrix, v: ZqVector, bound: float, *, limit: Optional[int] = None
) -> Optional[ZqVector]:
    """
    Exhaustive preimage search over Z_q^n.

    Args:
        A: Matrix (m×n)
        v: Target vector of length m
        bound: Euclidean radius around v
        limit: Override for the enumeration guard

    Returns:
        Optional[ZqVector]: The unique x with ‖A·x − v‖ <= bound, None if there is none
    """
    q, (m, n) = A.q, A.shape
    if len(v) != m:
        raise DimensionError(f"expected a vector of length {m}, got {len(v)}")
    _check_enumerable("invert_bruteforce", n, q, limit)
    target = np.array(v.coords, dtype=np.int64)
    found: list[np.ndarray] = []
    for xs in enumerate_domain(n, q):
        diff = centered_array(A.mul_many(xs) - target[None, :], q)
        hits = np.nonzero((diff * diff).sum(axis=1) <= bound * bound + 1e-9)[0]
        found.extend(xs[h] for h in hits)
        if len(found) > 1:
            raise AmbiguousPreimage(f"at least two preimages within {bound:.4f}")
    if not found:
        return None
    return ZqVector(q, tuple(int(c) for c in found[0]))


def matrix_distance_bruteforce(A: ZqMatrix, *, limit: Optional[int] = None) -> float:
    """min over nonzero x ∈ Z_q^n of ‖A·x‖ with centered representatives."""
    q, n = A.q, A.cols
    _check_enumerable("matrix_distance_bruteforce", n, q, limit)
    best = math.inf
    for xs in enumerate_domain(n, q):
        sq = (centered_array(A.mul_many(xs), q) ** 2).sum(axis=1).astype(float)
        sq[~xs.any(axis=1)] = math.inf
        best = min(best, float(sq.min()))
    logger.debug("column distance of %dx%d matrix mod %d: %.4f", A.rows, n, q, math.sqrt(best))
    return math.sqrt(best)


def keypair_payload(keypair: TrapdoorKeypair) -> KeypairPayload:
    t = keypair.trapdoor
    if t is None:
        return KeypairPayload(A=matrix_payload(keypair.A))
    R = ZqMatrix(keypair.q, np.mod(t.R, keypair.q))
    return KeypairPayload(
        A=matrix_payload(keypair.A),
        trapdoor=TrapdoorPayload(m_bar=t.m_bar, width=t.width, R=matrix_payload(R)),
    )


def keypair_from_payload(payload: KeypairPayload) -> TrapdoorKeypair:
    A = matrix_from_payload(payload.A)
    t = payload.trapdoor
    if t is None or t.R is None:
        return TrapdoorKeypair(A=A)
    R = centered_array(np.array(matrix_from_payload(t.R).entries, dtype=np.int64), A.q)
    R.setflags(write=False)
    return TrapdoorKeypair(A=A, trapdoor=GadgetTrapdoor(m_bar=t.m_bar, width=t.width, R=R))
