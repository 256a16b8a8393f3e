import itertools

import numpy as np
import pytest

from qlwe.core.exceptions import DimensionError, ParameterError
from qlwe.zq_lattice.zq import (
    ZqMatrix,
    ZqVector,
    binary_decode,
    binary_encode,
    bit_width,
    centered_array,
    centered_rep,
    enumerate_domain,
)


@pytest.mark.parametrize("a, q, expected", [(3, 7, 3), (4, 7, -3), (4, 8, 4), (0, 2, 0), (1, 2, 1)])
def test_centered_rep_examples(a, q, expected):
    assert centered_rep(a, q) == expected


@pytest.mark.parametrize("q", [2, 3, 5, 7, 8, 64])
def test_centered_rep_range(q):
    low, high = -((q + 1) // 2) + 1, q // 2
    for a in range(q):
        b = centered_rep(a, q)
        assert (b - a) % q == 0
        assert low <= b <= high


def test_centered_array_matches_scalar():
    values = np.arange(-20, 20)
    assert centered_array(values, 7).tolist() == [centered_rep(int(v) % 7, 7) for v in values]


@pytest.mark.parametrize("q, coords, bits", [
    (5, (3,), (1, 1, 0)),
    (5, (0,), (0, 0, 0)),
    (4, (2, 1), (0, 1, 1, 0)),
])
def test_binary_encode_examples(q, coords, bits):
    assert binary_encode(ZqVector(q, coords)) == bits


def test_binary_encode_is_injective():
    q, n = 5, 2
    codes = {binary_encode(ZqVector(q, x)) for x in itertools.product(range(q), repeat=n)}
    assert len(codes) == q ** n
    assert all(len(c) == n * bit_width(q) for c in codes)


def test_binary_decode_inverts_encode():
    x = ZqVector(11, (10, 0, 7))
    assert binary_decode(binary_encode(x), 11) == x


def test_vector_rejects_out_of_range():
    with pytest.raises(ParameterError):
        ZqVector(5, (5,))
    with pytest.raises(ParameterError):
        ZqVector(1, (0,))


def test_vector_arithmetic_wraps():
    a, b = ZqVector(8, (7, 1)), ZqVector(8, (2, 3))
    assert (a + b).coords == (1, 4)
    assert (a - b).coords == (5, 6)
    assert (-a).coords == (1, 7)
    assert a.centered() == (-1, 1)
    assert a.max_norm() == 1
    with pytest.raises(DimensionError):
        a + ZqVector(8, (1,))


def test_matrix_product():
    A = ZqMatrix.from_rows([[1, 2], [3, 4], [5, 6]], 7)
    x = ZqVector(7, (1, 1))
    assert A.mul_vec(x).coords == (3, 0, 4)
    assert A.mul_many(np.array([[1, 1], [0, 1]])).tolist() == [[3, 0, 4], [2, 4, 6]]
    with pytest.raises(DimensionError):
        A.mul_vec(ZqVector(7, (1,)))


def test_matrix_rejects_out_of_range_entries():
    with pytest.raises(ParameterError):
        ZqMatrix.from_rows([[8]], 8)


def test_large_modulus_products_are_exact():
    q = (1 << 61) - 1
    A = ZqMatrix.from_rows([[q - 1, q - 2]], q)
    x = ZqVector(q, (q - 1, q - 1))
    assert A.mul_vec(x).coords == ((1 + 2) % q,)


def test_enumerate_domain_covers_everything():
    rows = np.vstack(list(enumerate_domain(2, 5, chunk=7)))
    assert rows.shape == (25, 2)
    assert len({tuple(r) for r in rows.tolist()}) == 25
