"""Sparse real-amplitude states over H_2^{⊗bits} ⊗ H_q^{⊗n} ⊗ H_q^{⊗m}."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Optional

from qlwe.core.exceptions import ParameterError, ShapeMismatch

NORM_TOLERANCE = 1e-9

Basis = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SparseState:
    """
    Immutable map from basis tuples to real amplitudes.

    A basis tuple is ``(b..., x_1..x_n, z_1..z_m)`` with ``bits`` binary
    entries followed by ``n + m`` entries in [0, q). Entries are kept in
    lexicographic order so that sampling from a seeded generator is
    reproducible.
    """
    q: int
    shape: tuple[int, int, int]
    amplitudes: Mapping[Basis, float] = field(repr=False)

    def __post_init__(self):
        bits, n, m = self.shape
        if bits not in (0, 1) or n < 0 or m < 0:
            raise ParameterError(f"invalid register shape {self.shape}")
        width = bits + n + m
        cleaned: dict[Basis, float] = {}
        for key in sorted(self.amplitudes):
            amp = float(self.amplitudes[key])
            if amp == 0.0:
                continue
            if len(key) != width:
                raise ShapeMismatch(f"basis tuple {key} does not fit shape {self.shape}")
            if any(v not in (0, 1) for v in key[:bits]) or any(v < 0 or v >= self.q for v in key[bits:]):
                raise ParameterError(f"basis tuple {key} outside the register alphabets")
            cleaned[tuple(int(v) for v in key)] = amp
        if not cleaned:
            raise ParameterError("state has empty support")
        total = math.fsum(a * a for a in cleaned.values())
        if abs(total - 1.0) > NORM_TOLERANCE:
            raise ParameterError(f"state is not normalized: squared norm {total:.12f}")
        object.__setattr__(self, "amplitudes", cleaned)

    @classmethod
    def normalized(cls, q: int, shape: tuple[int, int, int], amplitudes: Mapping[Basis, float]) -> "SparseState":
        """Rescale ``amplitudes`` to unit norm before construction."""
        total = math.sqrt(math.fsum(a * a for a in amplitudes.values()))
        if total == 0.0:
            raise ParameterError("cannot normalize the zero vector")
        return cls(q, shape, {k: a / total for k, a in amplitudes.items()})

    @classmethod
    def basis_state(cls, q: int, shape: tuple[int, int, int], key: Iterable[int]) -> "SparseState":
        return cls(q, shape, {tuple(key): 1.0})

    @property
    def bits(self) -> int:
        return self.shape[0]

    @property
    def n(self) -> int:
        return self.shape[1]

    @property
    def m(self) -> int:
        return self.shape[2]

    def __len__(self) -> int:
        return len(self.amplitudes)

    def __iter__(self) -> Iterator[Basis]:
        return iter(self.amplitudes)

    def items(self):
        return self.amplitudes.items()

    def amplitude(self, key: Basis) -> float:
        return self.amplitudes.get(tuple(key), 0.0)

    def split(self, key: Basis) -> tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]:
        """Separate a basis tuple into its (bit, x, z) blocks."""
        bits, n, _ = self.shape
        return key[:bits], key[bits:bits + n], key[bits + n:]

    def squared_norm(self) -> float:
        return math.fsum(a * a for a in self.amplitudes.values())

    def inner(self, other: "SparseState") -> float:
        """⟨self|other⟩ (real amplitudes)."""
        if other.q != self.q or other.shape != self.shape:
            raise ShapeMismatch("inner product of states with different registers")
        small, large = (self, other) if len(self) <= len(other) else (other, self)
        return math.fsum(a * large.amplitude(k) for k, a in small.items())

    def tensor(self, other: "SparseState") -> "SparseState":
        """self ⊗ other; ``other`` must only add registers in later blocks."""
        if other.q != self.q:
            raise ShapeMismatch("tensor product of states with different moduli")
        sb, sn, sm = self.shape
        ob, on, om = other.shape
        if (ob and (sb or sn or sm)) or (on and sm):
            raise ShapeMismatch(f"cannot append registers {other.shape} after {self.shape}")
        shape = (sb + ob, sn + on, sm + om)
        return SparseState(self.q, shape, {
            k1 + k2: a1 * a2 for k1, a1 in self.items() for k2, a2 in other.items()
        })

    def dump_lines(self) -> Iterator[str]:
        """Debug dump: one JSON object per basis state, lexicographic."""
        for key, amp in self.items():
            yield json.dumps({"basis": list(key), "amp": amp})

    def max_norm(self, key: Basis, block: Optional[str] = None) -> int:
        """Centered max-norm of the q-ary part of ``key`` (or of one block)."""
        _, x, z = self.split(key)
        values = {"x": x, "z": z}.get(block, x + z)
        half = self.q // 2
        return max((abs(v - self.q) if v > half else v for v in values), default=0)
