"""Computational-basis and Hadamard-basis measurements of prover states."""
from __future__ import annotations

import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Optional

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import PreconditionViolation, ShapeMismatch, SizeGuardError
from qlwe.quantum_sim.robust import interval
from qlwe.quantum_sim.state import SparseState
from qlwe.zq_lattice.validation import LweInstance
from qlwe.zq_lattice.zq import ZqVector, binary_encode, bit_width, pack_bits, unpack_bits

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MeasurementRecord:
    register: str
    outcome: tuple[int, ...]
    log2_probability: float
    draw: Optional[float] = None

    def __post_init__(self):
        if self.log2_probability > 1e-9:
            raise ValueError(f"probability above one: 2^{self.log2_probability}")

    @property
    def probability(self) -> float:
        return 2.0 ** self.log2_probability


def _born_choice(weights: list[float], rng: np.random.Generator) -> tuple[int, float]:
    draw = float(rng.random())
    cdf = np.cumsum(weights)
    index = int(np.searchsorted(cdf, draw * cdf[-1], side="right"))
    return min(index, len(weights) - 1), draw


def last_register_distribution(state: SparseState) -> dict[tuple[int, ...], float]:
    """Marginal Born distribution of the z block, lexicographic in z."""
    head = state.bits + state.n
    marginal: dict[tuple[int, ...], float] = defaultdict(float)
    for key, amp in state.items():
        marginal[key[head:]] += amp * amp
    return dict(sorted(marginal.items()))


def project_last_register(state: SparseState, y: ZqVector) -> SparseState:
    """Renormalized slice of ``state`` on z = y, with the z block dropped."""
    if state.m != len(y) or state.q != y.q:
        raise ShapeMismatch(f"outcome of length {len(y)} for a state with m={state.m}")
    head = state.bits + state.n
    target = y.coords
    kept = {key[:head]: amp for key, amp in state.items() if key[head:] == target}
    return SparseState.normalized(state.q, (state.bits, state.n, 0), kept)


def measure_last_register(
        state: SparseState, rng: np.random.Generator
) -> tuple[ZqVector, SparseState, MeasurementRecord]:
    if state.m == 0:
        raise ShapeMismatch("state has no z block to measure")
    marginal = last_register_distribution(state)
    outcomes = list(marginal)
    index, draw = _born_choice(list(marginal.values()), rng)
    y = ZqVector(state.q, outcomes[index])
    record = MeasurementRecord("z", y.coords, math.log2(marginal[outcomes[index]]), draw)
    return y, project_last_register(state, y), record


def measure_committed_basis(collapsed: SparseState, rng: np.random.Generator) -> tuple[int, ZqVector]:
    """Born sample of (b, x) from a state on the (bit, x) registers."""
    if collapsed.bits != 1 or collapsed.m != 0:
        raise ShapeMismatch(f"expected (bit, x) registers, got shape {collapsed.shape}")
    keys = list(collapsed)
    index, _ = _born_choice([a * a for a in collapsed.amplitudes.values()], rng)
    key = keys[index]
    return key[0], ZqVector(collapsed.q, key[1:])


def _qubit_encoding(collapsed: SparseState) -> list[tuple[tuple[int, ...], float]]:
    if collapsed.shape != (1, collapsed.n, 0):
        raise ShapeMismatch(f"expected (bit, x) registers, got shape {collapsed.shape}")
    return [
        ((key[0],) + binary_encode(ZqVector(collapsed.q, key[1:])), amp)
        for key, amp in collapsed.items()
    ]


def _walsh_hadamard(psi: np.ndarray) -> np.ndarray:
    size = psi.shape[0]
    h = 1
    while h < size:
        block = psi.reshape(-1, 2, h)
        psi = np.stack([block[:, 0, :] + block[:, 1, :], block[:, 0, :] - block[:, 1, :]], axis=1).reshape(-1)
        h *= 2
    return psi / math.sqrt(size)


def _dense_outcome_probabilities(terms, width: int) -> np.ndarray:
    if width > settings.DENSE_QUBIT_LIMIT:
        raise SizeGuardError("hadamard_measure", width, settings.DENSE_QUBIT_LIMIT)
    psi = np.zeros(1 << width)
    for bits, amp in terms:
        psi[pack_bits(bits)] = amp
    return _walsh_hadamard(psi) ** 2


def hadamard_distribution(collapsed: SparseState) -> dict[tuple[int, tuple[int, ...]], float]:
    """Exact law of (c, d) after H on every qubit of (b, J(x)); dense."""
    terms = _qubit_encoding(collapsed)
    width = 1 + collapsed.n * bit_width(collapsed.q)
    probs = _dense_outcome_probabilities(terms, width)
    out = {}
    for index in np.nonzero(probs > 1e-15)[0]:
        bits = unpack_bits(int(index), width)
        out[(bits[0], bits[1:])] = float(probs[index])
    return out


def hadamard_measure(collapsed: SparseState, rng: np.random.Generator) -> tuple[int, tuple[int, ...]]:
    """
    Measure (b, J(x)) in the Hadamard basis.

    Bit 0 of the qubit string is b, followed by J(x) little-endian per
    coordinate. States with at most two terms are sampled analytically:
    the outcome parity against v₀ ⊕ v₁ is 0 with probability (1 + 2α₀α₁)/2 and
    the outcome is otherwise uniform.
    """
    terms = _qubit_encoding(collapsed)
    width = 1 + collapsed.n * bit_width(collapsed.q)
    if len(terms) <= 2:
        w = rng.integers(0, 2, size=width)
        if len(terms) == 2:
            (v0, a0), (v1, a1) = terms
            delta = np.bitwise_xor(np.array(v0), np.array(v1))
            parity = int(rng.random() >= (1 + 2 * a0 * a1) / 2)
            if int(w.dot(delta)) % 2 != parity:
                w[int(np.argmax(delta))] ^= 1
        bits = tuple(int(v) for v in w)
    else:
        probs = _dense_outcome_probabilities(terms, width)
        index, _ = _born_choice(probs.tolist(), rng)
        bits = unpack_bits(index, width)
    return bits[0], bits[1:]


def sample_commitment(
        k: LweInstance, r: int, rng: np.random.Generator
) -> tuple[ZqVector, SparseState, MeasurementRecord]:
    """
    Sample y and the collapsed (b, x) state without building |Φ⟩.

    Draws a uniform term (b, x, z) of |Φ⟩, so y follows the Born marginal,
    and keeps the partner preimage when its z lands in I^m. Exact whenever
    the shifted supports are disjoint. Reads the secret and error witnesses,
    so results are simulation-only.
    """
    if k.s_witness is None or k.e_witness is None:
        raise PreconditionViolation("sample_commitment needs the secret and error witnesses")
    q, n, m = k.q, k.n, k.m
    low = interval(r).start
    b = int(rng.integers(0, 2))
    x = ZqVector.uniform(n, q, rng)
    z = rng.integers(low, -low, size=m)
    ax = k.A.mul_vec(x).coords
    y = ZqVector.reduce([int(zi) + ai + b * ui for zi, ai, ui in zip(z, ax, k.u.coords)], q)

    e = np.array(k.e_witness.centered(), dtype=np.int64)
    partner_z = z - e if b == 0 else z + e
    terms = {(b,) + x.coords: 1.0}
    if ((partner_z >= low) & (partner_z < -low)).all():
        partner = x - k.s_witness if b == 0 else x + k.s_witness
        terms[(1 - b,) + partner.coords] = 1.0
    collapsed = SparseState.normalized(q, (1, n, 0), terms)
    log2_p = math.log2(len(terms)) - 1 - n * math.log2(q) - m * r
    return y, collapsed, MeasurementRecord("z", y.coords, log2_p)
