"""The sets G_{b,x} and G_{s,b,x} of good d strings and tuple classification.

Coordinates are 1-based. For even n, G_{0,x} looks at coordinates
1..n/2+1 and G_{1,x} at n/2..n of I_{b,x}(d).
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from qlwe.core.exceptions import DimensionError, ParameterError
from qlwe.schemas.transcript import HardcoreTuple, TupleClass
from qlwe.zq_lattice.zq import ZqVector, binary_encode, bit_width


def _check_bits(d: Sequence[int], n: int, q: int) -> np.ndarray:
    width = bit_width(q)
    bits = np.asarray(d, dtype=np.int64)
    if bits.shape != (n * width,):
        raise DimensionError(f"d must have {n * width} bits, got {bits.size}")
    return bits


def equation_bit(d: Sequence[int], x: ZqVector, partner: ZqVector) -> int:
    """d·(J(x) ⊕ J(partner)) mod 2."""
    bits = _check_bits(d, len(x), x.q)
    diff = np.bitwise_xor(binary_encode(x), binary_encode(partner))
    return int(bits.dot(diff) % 2)


def hardcore_bit(d: Sequence[int], s: ZqVector, b: int, x: ZqVector) -> int:
    """d·(J(x) ⊕ J(x − (−1)^b·s)), the bit an honest prover reports."""
    partner = x - s if b == 0 else x + s
    return equation_bit(d, x, partner)


def i_map(d: Sequence[int], b: int, x: ZqVector) -> tuple[int, ...]:
    """Coordinate i is ⟨d_i, J(x_i) ⊕ J(x_i − (−1)^b)⟩ over the i-th width-bit block."""
    n, q = len(x), x.q
    bits = _check_bits(d, n, q).reshape(n, bit_width(q))
    ones = ZqVector(q, (1,) * n)
    shifted = x - ones if b == 0 else x + ones
    diff = np.bitwise_xor(binary_encode(x), binary_encode(shifted)).reshape(bits.shape)
    return tuple(int(v) for v in (bits * diff).sum(axis=1) % 2)


def g_index_sets(n: int) -> tuple[range, range]:
    """1-based coordinate ranges inspected by G_{0,x} and G_{1,x}."""
    if n % 2:
        raise ParameterError(f"the G sets need even n, got n={n}")
    half = n // 2
    return range(1, min(half + 1, n) + 1), range(half, n + 1)


def in_G_bx(d: Sequence[int], b: int, x: ZqVector) -> bool:
    indices = g_index_sets(len(x))[b]
    image = i_map(d, b, x)
    return any(image[i - 1] for i in indices)


def in_G_sbx(d: Sequence[int], s: ZqVector, b: int, x: ZqVector) -> bool:
    if b == 0:
        return in_G_bx(d, 0, x) and in_G_bx(d, 1, x - s)
    return in_G_bx(d, 0, x + s) and in_G_bx(d, 1, x)


def g_density_bound(n: int) -> float:
    """Union bound 1 − 2^{−|I_0|} − 2^{−|I_1|} on the density of G_{s,b,x}."""
    low, high = g_index_sets(n)
    return 1 - 2.0 ** -len(low) - 2.0 ** -len(high)


def classify_tuple(t: HardcoreTuple, s: ZqVector) -> TupleClass:
    x = ZqVector(s.q, tuple(t.x))
    if not in_G_sbx(t.d, s, t.b, x):
        return TupleClass.NEITHER
    if t.c == hardcore_bit(t.d, s, t.b, x):
        return TupleClass.IN_H
    return TupleClass.IN_HBAR
