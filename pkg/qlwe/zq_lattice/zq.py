"""Integers mod q: vectors, matrices, centered representatives and the J encoding."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from qlwe.core.exceptions import DimensionError, ParameterError
from qlwe.schemas.lattice import ZqPayload

# Above this modulus matrix products are carried out on Python integers
_INT64_SAFE_MODULUS = 1 << 28


def bit_width(q: int) -> int:
    """Number of bits ⌈log₂ q⌉ used per coordinate by the J encoding."""
    if q < 2:
        raise ParameterError(f"modulus must be >= 2, got {q}")
    return (q - 1).bit_length()


def centered_rep(a: int, q: int) -> int:
    """Representative of ``a`` in {−⌈q/2⌉+1, …, ⌊q/2⌋}."""
    a %= q
    return a - q if a > q // 2 else a


def centered_array(values: np.ndarray, q: int) -> np.ndarray:
    out = np.mod(values, q)
    out[out > q // 2] -= q
    return out


def _dtype_for(q: int):
    return np.int64 if q < _INT64_SAFE_MODULUS else object


@dataclass(frozen=True)
class ZqVector:
    q: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.q < 2:
            raise ParameterError(f"modulus must be >= 2, got {self.q}")
        coords = tuple(int(c) for c in self.coords)
        if any(c < 0 or c >= self.q for c in coords):
            raise ParameterError(f"coordinates must lie in [0, {self.q})")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def reduce(cls, values: Iterable[int], q: int) -> "ZqVector":
        return cls(q, tuple(int(v) % q for v in values))

    @classmethod
    def zeros(cls, length: int, q: int) -> "ZqVector":
        return cls(q, (0,) * length)

    @classmethod
    def uniform(cls, length: int, q: int, rng: np.random.Generator) -> "ZqVector":
        return cls(q, tuple(int(v) for v in rng.integers(0, q, size=length)))

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def _check(self, other: "ZqVector") -> None:
        if other.q != self.q or len(other) != len(self):
            raise DimensionError("vectors differ in modulus or length")

    def __add__(self, other: "ZqVector") -> "ZqVector":
        self._check(other)
        return ZqVector(self.q, tuple((a + b) % self.q for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ZqVector") -> "ZqVector":
        self._check(other)
        return ZqVector(self.q, tuple((a - b) % self.q for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "ZqVector":
        return ZqVector(self.q, tuple((-a) % self.q for a in self.coords))

    def scale(self, k: int) -> "ZqVector":
        return ZqVector(self.q, tuple((k * a) % self.q for a in self.coords))

    def centered(self) -> tuple[int, ...]:
        return tuple(centered_rep(a, self.q) for a in self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=_dtype_for(self.q))

    def norm(self) -> float:
        """Euclidean norm of the centered representative."""
        return float(np.sqrt(sum(c * c for c in self.centered())))

    def max_norm(self) -> int:
        return max((abs(c) for c in self.centered()), default=0)

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True, eq=False)
class ZqMatrix:
    q: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.q < 2:
            raise ParameterError(f"modulus must be >= 2, got {self.q}")
        entries = np.array(self.entries, dtype=_dtype_for(self.q))
        if entries.ndim != 2:
            raise DimensionError(f"matrix entries must be 2-dimensional, got shape {entries.shape}")
        if entries.size and (entries.min() < 0 or entries.max() >= self.q):
            raise ParameterError(f"entries must lie in [0, {self.q})")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def reduce(cls, values, q: int) -> "ZqMatrix":
        return cls(q, np.mod(np.array(values, dtype=_dtype_for(q)), q))

    @classmethod
    def uniform(cls, rows: int, cols: int, q: int, rng: np.random.Generator) -> "ZqMatrix":
        return cls(q, rng.integers(0, q, size=(rows, cols)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], q: int) -> "ZqMatrix":
        return cls(q, np.array(rows))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ZqMatrix)
            and other.q == self.q
            and other.shape == self.shape
            and bool(np.array_equal(other.entries, self.entries))
        )

    def __hash__(self) -> int:
        return hash((self.q, self.shape, tuple(int(v) for v in self.entries.ravel())))

    def mul_vec(self, x: ZqVector) -> ZqVector:
        if x.q != self.q or len(x) != self.cols:
            raise DimensionError(f"cannot multiply {self.shape} matrix by vector of length {len(x)}")
        product = np.mod(self.entries.dot(x.array()), self.q)
        return ZqVector(self.q, tuple(int(v) for v in product))

    def mul_many(self, xs: np.ndarray) -> np.ndarray:
        """A·x for every row x of ``xs`` (shape k×cols); returns k×rows in [0,q)."""
        return np.mod(np.asarray(xs, dtype=self.entries.dtype).dot(self.entries.T), self.q)

    def column(self, j: int) -> ZqVector:
        return ZqVector(self.q, tuple(int(v) for v in self.entries[:, j]))

    def hstack(self, other: "ZqMatrix") -> "ZqMatrix":
        if other.q != self.q or other.rows != self.rows:
            raise DimensionError("cannot stack matrices with different row counts")
        return ZqMatrix(self.q, np.hstack([self.entries, other.entries]))


def binary_encode(x: ZqVector) -> tuple[int, ...]:
    """J(x): little-endian ⌈log₂ q⌉-bit encoding of each canonical coordinate, concatenated."""
    width = bit_width(x.q)
    return tuple((c >> j) & 1 for c in x.coords for j in range(width))


def binary_decode(bits: Sequence[int], q: int) -> ZqVector:
    width = bit_width(q)
    if len(bits) % width:
        raise DimensionError(f"bit string length {len(bits)} is not a multiple of {width}")
    coords = []
    for start in range(0, len(bits), width):
        coords.append(sum(int(b) << j for j, b in enumerate(bits[start:start + width])))
    return ZqVector(q, tuple(coords))


def pack_bits(bits: Sequence[int]) -> int:
    """Little-endian bit tuple to integer."""
    return sum(int(b) << j for j, b in enumerate(bits))


def unpack_bits(value: int, width: int) -> tuple[int, ...]:
    return tuple((value >> j) & 1 for j in range(width))


def enumerate_domain(n: int, q: int, chunk: int = 1 << 15) -> Iterator[np.ndarray]:
    """All of Z_q^n in chunks of rows, first coordinate varying fastest."""
    total = q ** n
    powers = np.array([q ** i for i in range(n)], dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % q


def matrix_payload(A: ZqMatrix) -> ZqPayload:
    return ZqPayload(q=A.q, dims=list(A.shape), entries=[int(v) for v in A.entries.ravel()])


def matrix_from_payload(payload: ZqPayload) -> ZqMatrix:
    if len(payload.dims) != 2:
        raise DimensionError(f"expected matrix dims [m, n], got {payload.dims}")
    return ZqMatrix(payload.q, np.array(payload.entries, dtype=object).reshape(payload.dims))
