"""Robust interval states, shifted overlaps and the boundedness predicates."""
from __future__ import annotations

import itertools
import logging
import math
from typing import Iterable, Optional

from qlwe.core.config import settings
from qlwe.core.exceptions import DimensionError, ParameterError, SizeGuardError
from qlwe.quantum_sim.state import SparseState
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.validation import PreconditionReport, RobustnessSummary
from qlwe.zq_lattice.zq import ZqVector

logger = logging.getLogger(__name__)


def interval(r: int) -> range:
    """I = {−2^{r−1}, …, 2^{r−1}−1} as centered integers."""
    half = 1 << (r - 1)
    return range(-half, half)


def create_robust_state(m: int, q: int, r: int) -> SparseState:
    """Uniform superposition over I^m on m q-ary registers."""
    if r < 1 or (1 << r) > q:
        raise ParameterError(f"need 1 <= r and 2^r <= q, got r={r}, q={q}")
    size = 1 << (m * r)
    if size > settings.SPARSE_SUPPORT_LIMIT:
        raise SizeGuardError("create_robust_state", size, settings.SPARSE_SUPPORT_LIMIT)
    amp = 2.0 ** (-m * r / 2)
    points = [v % q for v in interval(r)]
    return SparseState(q, (0, 0, m), {key: amp for key in itertools.product(points, repeat=m)})


def overlap_shifted(state: SparseState, e: ZqVector) -> float:
    """⟨φ|φ+e⟩ with the shift applied mod q to the last m registers."""
    if len(e) != state.m or e.q != state.q:
        raise DimensionError(f"shift must have length {state.m} mod {state.q}")
    q, head = state.q, state.bits + state.n
    total = 0.0
    for key, amp in state.items():
        source = key[:head] + tuple((z - ei) % q for z, ei in zip(key[head:], e.coords))
        total += amp * state.amplitude(source)
    return total


def interval_overlap(r: int, e: Iterable[int]) -> float:
    """Closed form Π max(0, 2^r − |e_i|)/2^r for the interval state (centered e, no wrap-around)."""
    size = 1 << r
    out = 1.0
    for ei in e:
        out *= max(0, size - abs(ei)) / size
    return out


def check_bounded(state: SparseState, B: float) -> bool:
    """True iff every support vector has centered max-norm below B."""
    return all(state.max_norm(key) < B for key in state)


def worst_shift(state: SparseState, B: float) -> tuple[float, ZqVector]:
    """Smallest ⟨φ|φ+e⟩ over all shifts with ‖e‖∞ <= B, by enumeration."""
    radius = min(math.floor(B), state.q // 2)
    count = (2 * radius + 1) ** state.m
    if count > settings.ENUMERATION_LIMIT:
        raise SizeGuardError("check_robust", count, settings.ENUMERATION_LIMIT)
    best: Optional[tuple[float, ZqVector]] = None
    for shift in itertools.product(range(-radius, radius + 1), repeat=state.m):
        e = ZqVector.reduce(shift, state.q)
        value = overlap_shifted(state, e)
        if best is None or value < best[0]:
            best = (value, e)
    return best


def check_robust(state: SparseState, eps: float, B: float) -> bool:
    """(ε,B)-robustness: ⟨φ|φ+e⟩ >= 1 − ε for every ‖e‖∞ <= B."""
    value, e = worst_shift(state, B)
    logger.debug("worst shift %s gives overlap %.6f", e.centered(), value)
    return value >= 1 - eps - 1e-12


def uniform_q_superposition(q: int, registers: int = 1) -> tuple[SparseState, float]:
    """
    Exact uniform state on ``registers`` q-ary registers.

    Returns:
        tuple[SparseState, float]: The state and the error budget registers/q²
        a constant-depth preparation would incur
    """
    if q < 2:
        raise ParameterError(f"modulus must be >= 2, got {q}")
    size = q ** registers
    if size > settings.SPARSE_SUPPORT_LIMIT:
        raise SizeGuardError("uniform_q_superposition", size, settings.SPARSE_SUPPORT_LIMIT)
    amp = 1 / math.sqrt(size)
    state = SparseState(q, (0, registers, 0), {
        key: amp for key in itertools.product(range(q), repeat=registers)
    })
    return state, registers / (q * q)


def closeness_precondition(params: ProtocolParams) -> PreconditionReport:
    threshold = params.closeness_threshold
    return PreconditionReport(
        holds=params.q >= threshold, q=params.q, threshold=threshold, slack=params.q / threshold,
    )


def robust_parameters(params: ProtocolParams) -> RobustnessSummary:
    half = 1 << (params.r - 1)
    return RobustnessSummary(
        r=params.r,
        B_P=params.B_P,
        interval_size=1 << params.r,
        bounded_radius=half,
        overlap_floor=1 - params.m * params.B_V / half,
        closeness_budget=params.n / params.q ** 2,
    )
