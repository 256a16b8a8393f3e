"""Provers: the simulated honest quantum prover and classical baselines."""
from __future__ import annotations

import copy
import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Callable, Dict, Optional, Sequence, Type

import numpy as np

from qlwe.core.config import settings
from qlwe.core.exceptions import ParameterError, ProtocolPhaseError, UnsupportedOperation
from qlwe.protocol.gsets import equation_bit, in_G_bx, in_G_sbx
from qlwe.quantum_sim.lwe_map import phi_support_size, prepare_Phi
from qlwe.quantum_sim.measure import (
    hadamard_measure,
    measure_committed_basis,
    measure_last_register,
    sample_commitment,
)
from qlwe.quantum_sim.robust import closeness_precondition
from qlwe.quantum_sim.state import SparseState
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.transcript import EquationResponse, PreimageResponse
from qlwe.zq_lattice.validation import LweInstance
from qlwe.zq_lattice.zq import ZqVector, bit_width

logger = logging.getLogger(__name__)

# Rejection-sampling attempts when a baseline looks for d inside a G set
G_SAMPLING_ATTEMPTS = 256


class Prover(ABC):
    """
    Prover interface for one round.

    ``needs_witness`` provers are handed the instance with s and e attached;
    their transcripts are marked simulation-only.
    """
    name: str = ""
    needs_witness: bool = False

    def __init__(self, params: ProtocolParams, rng: np.random.Generator):
        self.params = params
        self.rng = rng
        self.instance: Optional[LweInstance] = None

    @property
    def simulation_only(self) -> bool:
        return self.needs_witness

    @abstractmethod
    def commit(self, instance: LweInstance) -> ZqVector:
        ...

    @abstractmethod
    def respond(self, r: int):
        ...

    def snapshot(self) -> Any:
        raise UnsupportedOperation(f"prover '{self.name}' cannot be rewound")

    def restore(self, snapshot: Any) -> None:
        raise UnsupportedOperation(f"prover '{self.name}' cannot be rewound")

    def _random_bits(self) -> np.ndarray:
        return self.rng.integers(0, 2, size=self.params.n * bit_width(self.params.q))

    def _bits_where(self, accept: Callable[[Sequence[int]], bool]) -> list[int]:
        d = self._random_bits()
        for _ in range(G_SAMPLING_ATTEMPTS - 1):
            if accept(d):
                break
            d = self._random_bits()
        return [int(v) for v in d]


class ClassicalProver(Prover):
    """Classical strategies: all state is plain data, so rewinding is a copy."""

    def __init__(self, params: ProtocolParams, rng: np.random.Generator):
        super().__init__(params, rng)
        self.memory: Dict[str, Any] = {}

    def snapshot(self) -> Any:
        return copy.deepcopy(self.memory), copy.deepcopy(self.rng.bit_generator.state)

    def restore(self, snapshot: Any) -> None:
        memory, state = snapshot
        self.memory = copy.deepcopy(memory)
        self.rng.bit_generator.state = copy.deepcopy(state)

    def _committed_x(self) -> ZqVector:
        if "x" not in self.memory:
            raise ProtocolPhaseError(f"prover '{self.name}' has not committed")
        return self.memory["x"]


class PassR0Prover(ClassicalProver):
    """Commits y = A·x for a random x, so r = 0 always passes; guesses c for r = 1."""
    name = "pass_r0"

    def commit(self, instance: LweInstance) -> ZqVector:
        self.instance = instance
        x = ZqVector.uniform(self.params.n, self.params.q, self.rng)
        self.memory["x"] = x
        return instance.A.mul_vec(x)

    def respond(self, r: int):
        x = self._committed_x()
        if r == 0:
            return PreimageResponse(b=0, x=list(x.coords))
        c = int(self.rng.integers(0, 2))
        d = self._bits_where(lambda bits: in_G_bx(bits, 0, x))
        return EquationResponse(c=c, d=d)


class RandomProver(ClassicalProver):
    """Every message uniform."""
    name = "random"

    def commit(self, instance: LweInstance) -> ZqVector:
        self.instance = instance
        self.memory["x"] = ZqVector.zeros(self.params.n, self.params.q)
        return ZqVector.uniform(self.params.m, self.params.q, self.rng)

    def respond(self, r: int):
        if r == 0:
            b = int(self.rng.integers(0, 2))
            return PreimageResponse(b=b, x=list(ZqVector.uniform(self.params.n, self.params.q, self.rng).coords))
        return EquationResponse(c=int(self.rng.integers(0, 2)), d=[int(v) for v in self._random_bits()])


class ColludingProver(ClassicalProver):
    """Knows s: commits y = A·x and answers both challenges correctly."""
    name = "colluding"
    needs_witness = True

    def commit(self, instance: LweInstance) -> ZqVector:
        if instance.s_witness is None:
            raise ParameterError("the colluding prover needs the secret")
        self.instance = instance
        x = ZqVector.uniform(self.params.n, self.params.q, self.rng)
        self.memory["x"] = x
        return instance.A.mul_vec(x)

    def respond(self, r: int):
        x = self._committed_x()
        if r == 0:
            return PreimageResponse(b=0, x=list(x.coords))
        s = self.instance.s_witness
        d = self._bits_where(lambda bits: in_G_sbx(bits, s, 0, x))
        return EquationResponse(c=equation_bit(d, x, x - s), d=d)


class QuantumMode(str, Enum):
    AUTO = "auto"
    FULL = "full"
    LAZY = "lazy"


def resolve_quantum_mode(params: ProtocolParams, mode: str = QuantumMode.AUTO) -> QuantumMode:
    """
    Pick how the honest prover builds its commitment.

    ``full`` materializes |Φ⟩ and measures it; ``lazy`` samples the
    commitment directly from the witnesses. ``auto`` takes the full path
    only when |Φ⟩ fits the support limit and the closeness condition holds.
    """
    if mode not in (QuantumMode.AUTO, QuantumMode.FULL, QuantumMode.LAZY):
        raise ParameterError(f"unknown quantum prover mode '{mode}'")
    if mode != QuantumMode.AUTO:
        return QuantumMode(mode)
    fits = phi_support_size(params) <= settings.SPARSE_SUPPORT_LIMIT
    return QuantumMode.FULL if fits and closeness_precondition(params).holds else QuantumMode.LAZY


class QuantumProver(Prover):
    """The honest prover, simulated exactly; rewinding clones the simulator state."""
    name = "quantum"

    def __init__(
            self, params: ProtocolParams, rng: np.random.Generator, *,
            mode: str = QuantumMode.AUTO, override: bool = False,
    ):
        super().__init__(params, rng)
        self.mode = resolve_quantum_mode(params, mode)
        self.override = override
        self.collapsed: Optional[SparseState] = None

    @property
    def needs_witness(self) -> bool:
        return self.mode == QuantumMode.LAZY

    def commit(self, instance: LweInstance) -> ZqVector:
        self.instance = instance
        if self.mode == QuantumMode.FULL:
            phi, _ = prepare_Phi(instance, self.params, override=self.override)
            y, self.collapsed, record = measure_last_register(phi, self.rng)
        else:
            y, self.collapsed, record = sample_commitment(instance, self.params.r, self.rng)
        logger.debug("committed with log2 p = %.3f, %d-term claw", record.log2_probability, len(self.collapsed))
        return y

    def respond(self, r: int):
        if self.collapsed is None:
            raise ProtocolPhaseError("quantum prover has not committed")
        if r == 0:
            b, x = measure_committed_basis(self.collapsed, self.rng)
            return PreimageResponse(b=b, x=list(x.coords))
        c, d = hadamard_measure(self.collapsed, self.rng)
        return EquationResponse(c=c, d=list(d))

    def snapshot(self) -> Any:
        return self.collapsed, copy.deepcopy(self.rng.bit_generator.state)

    def restore(self, snapshot: Any) -> None:
        self.collapsed, state = snapshot
        self.rng.bit_generator.state = copy.deepcopy(state)


PROVERS: Dict[str, Type[Prover]] = {
    QuantumProver.name: QuantumProver,
    PassR0Prover.name: PassR0Prover,
    RandomProver.name: RandomProver,
    ColludingProver.name: ColludingProver,
}


def make_prover(name: str, params: ProtocolParams, rng: np.random.Generator, **options) -> Prover:
    try:
        cls = PROVERS[name]
    except KeyError:
        raise ParameterError(f"unknown prover '{name}', expected one of {sorted(PROVERS)}") from None
    return cls(params, rng, **options)


def classical_baseline_prover(strategy: str, params: ProtocolParams, rng: np.random.Generator) -> ClassicalProver:
    if strategy not in (PassR0Prover.name, RandomProver.name):
        raise ParameterError(f"unknown baseline strategy '{strategy}'")
    return make_prover(strategy, params, rng)


def quantum_prover_step(prover: QuantumProver, phase: str, message):
    """Single-step driver: ``commit`` takes the instance, ``respond`` the challenge bit."""
    if phase == "commit":
        return prover.commit(message)
    if phase == "respond":
        return prover.respond(message)
    raise ProtocolPhaseError(f"unknown prover phase '{phase}'")
