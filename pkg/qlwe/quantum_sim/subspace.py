"""Brute-force projection onto H_k = span{|Ψ_y⟩|y⟩ : y ∈ Λ_k}."""
from __future__ import annotations

import itertools
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import AmbiguousPreimage, PreconditionViolation, ShapeMismatch, SizeGuardError
from qlwe.quantum_sim.state import SparseState
from qlwe.schemas.params import ProtocolParams
from qlwe.zq_lattice.trapdoor import invert_bruteforce
from qlwe.zq_lattice.validation import LweInstance
from qlwe.zq_lattice.zq import ZqVector, enumerate_domain

logger = logging.getLogger(__name__)


def _ball(m: int, q: int, radius: float) -> np.ndarray:
    """Integer vectors of Euclidean norm <= radius inside the centered box of Z_q^m."""
    reach = math.floor(radius)
    low, high = max(-reach, -((q + 1) // 2) + 1), min(reach, q // 2)
    count = (high - low + 1) ** m
    if count > settings.ENUMERATION_LIMIT:
        raise SizeGuardError("subspace ball", count, settings.ENUMERATION_LIMIT)
    grid = np.array(list(itertools.product(range(low, high + 1), repeat=m)), dtype=np.int64).reshape(-1, m)
    return grid[(grid * grid).sum(axis=1) <= radius * radius + 1e-9]


@dataclass(frozen=True)
class SubspaceOracle:
    """Λ_k with the unique x_y of every y, and the offset x_u of the b = 1 branch."""
    k: LweInstance
    radius: float
    x_u: ZqVector
    preimages: dict[tuple[int, ...], tuple[int, ...]] = field(repr=False)

    @classmethod
    def build(cls, k: LweInstance, params: ProtocolParams) -> "SubspaceOracle":
        q, n, m = k.q, k.n, k.m
        if q ** m > settings.ENUMERATION_LIMIT:
            raise SizeGuardError("distance_to_Hk", q ** m, settings.ENUMERATION_LIMIT)
        radius = params.inversion_bound
        x_u = k.s_witness if k.s_witness is not None else invert_bruteforce(k.A, k.u, radius)
        if x_u is None:
            raise PreconditionViolation("u has no preimage within the inversion bound")
        ball = _ball(m, q, radius)
        preimages: dict[tuple[int, ...], tuple[int, ...]] = {}
        for xs in enumerate_domain(n, q):
            images = k.A.mul_many(xs)
            for x, ax in zip(xs, images):
                x_key = tuple(int(v) for v in x)
                for y in np.mod(ax[None, :] + ball, q):
                    y_key = tuple(int(v) for v in y)
                    seen = preimages.setdefault(y_key, x_key)
                    if seen != x_key:
                        raise AmbiguousPreimage(f"{y_key} lies within {radius:.4f} of two lattice points")
        logger.debug("Λ_k has %d points (radius %.4f)", len(preimages), radius)
        return cls(k=k, radius=radius, x_u=x_u, preimages=preimages)

    def __len__(self) -> int:
        return len(self.preimages)

    def __contains__(self, y) -> bool:
        return tuple(y) in self.preimages

    def claw(self, y: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """The two basis keys (0, x_y, y) and (1, x_y − x_u, y)."""
        x_y = self.preimages[tuple(y)]
        partner = (ZqVector(self.k.q, x_y) - self.x_u).coords
        return (0,) + x_y + tuple(y), (1,) + partner + tuple(y)

    def basis_state(self, y: tuple[int, ...]) -> SparseState:
        """|Ψ_y⟩|y⟩."""
        first, second = self.claw(y)
        amp = 1 / math.sqrt(2)
        return SparseState(self.k.q, (1, self.k.n, self.k.m), {first: amp, second: amp})


def distance_to_Hk(
        state: SparseState,
        k: LweInstance,
        params: ProtocolParams,
        oracle: Optional[SubspaceOracle] = None,
) -> float:
    """‖|Φ⟩ − Π|Φ⟩‖² with Π the projector onto H_k."""
    if state.shape != (1, k.n, k.m) or state.q != k.q:
        raise ShapeMismatch(f"expected registers (1, {k.n}, {k.m}), got {state.shape}")
    oracle = oracle or SubspaceOracle.build(k, params)
    head = 1 + k.n
    projections: dict[tuple[int, ...], float] = defaultdict(float)
    for key, amp in state.items():
        y = key[head:]
        if y in oracle and key in oracle.claw(y):
            projections[y] += amp
    captured = math.fsum(v * v / 2 for v in projections.values())
    return max(0.0, state.squared_norm() - captured)
