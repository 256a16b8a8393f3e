import itertools
import math

import numpy as np
import pytest

from qlwe.core.exceptions import AmbiguousPreimage, DimensionError, InversionFailed, SizeGuardError
from qlwe.harness.stats import chi_square_critical, uniformity_statistic
from qlwe.zq_lattice.trapdoor import (
    gentrap,
    invert,
    invert_bruteforce,
    matrix_distance_bruteforce,
    min_gadget_rows,
    residual_norm,
)
from qlwe.zq_lattice.zq import ZqMatrix, ZqVector, bit_width


def small_error(m: int, q: int, radius: float, rng: np.random.Generator) -> ZqVector:
    """A random e with ‖e‖ strictly below ``radius``."""
    reach = math.floor(radius)
    while True:
        values = np.zeros(m, dtype=np.int64)
        support = rng.choice(m, size=int(rng.integers(0, m + 1)), replace=False)
        values[support] = rng.integers(-reach, reach + 1, size=len(support))
        if math.sqrt(float((values * values).sum())) < radius:
            return ZqVector.reduce(values.tolist(), q)


def test_gentrap_rejects_short_matrices(rng):
    with pytest.raises(DimensionError):
        gentrap(2, min_gadget_rows(2, 8) - 1, 8, rng)


@pytest.mark.parametrize("n, q", [(2, 8), (2, 64), (3, 7), (1, 100), (12, 1 << 26)])
def test_invert_exact_images(n, q, rng):
    keypair = gentrap(n, min_gadget_rows(n, q) + 2, q, rng)
    for _ in range(20):
        x = ZqVector.uniform(n, q, rng)
        assert invert(keypair.A, keypair.trapdoor, keypair.A.mul_vec(x)) == x


@pytest.mark.parametrize("q", [8, 16, 32, 64])
def test_invert_agrees_with_bruteforce(q, rng):
    n = 2
    m = n * (bit_width(q) + 1)
    disagreements = 0
    for _ in range(250):
        keypair = gentrap(n, m, q, rng)
        radius = keypair.trapdoor.decoding_radius(q)
        x = ZqVector.uniform(n, q, rng)
        v = keypair.A.mul_vec(x) + small_error(m, q, radius, rng)
        fast = invert(keypair.A, keypair.trapdoor, v)
        slow = invert_bruteforce(keypair.A, v, radius)
        disagreements += not (fast == slow == x)
    assert disagreements == 0


def test_gentrap_distance_meets_bound():
    n, q, m = 2, 8, 10
    hits = 0
    for seed in range(100):
        keypair = gentrap(n, m, q, np.random.default_rng(seed))
        bound = 2 * keypair.trapdoor.decoding_radius(q)
        hits += matrix_distance_bruteforce(keypair.A) >= bound - 1e-9
    assert hits >= 95


@pytest.mark.slow
def test_gentrap_entries_look_uniform():
    q, seeds = 8, 10 ** 4
    counts = np.zeros(q, dtype=int)
    for seed in range(seeds):
        keypair = gentrap(2, 10, q, np.random.default_rng(seed))
        counts[int(keypair.A.entries[-1, 0])] += 1
    statistic, _ = uniformity_statistic(counts)
    assert statistic < chi_square_critical(q - 1, 0.01)


def test_invert_flags_uniform_targets(rng):
    n, q = 2, 64
    keypair = gentrap(n, min_gadget_rows(n, q), q, rng)
    radius = keypair.trapdoor.decoding_radius(q)
    flagged = 0
    for _ in range(1000):
        v = ZqVector.uniform(keypair.m, q, rng)
        try:
            x = invert(keypair.A, keypair.trapdoor, v)
        except InversionFailed:
            flagged += 1
            continue
        flagged += residual_norm(keypair.A, x, v) > radius
    assert flagged >= 990


def test_invert_checks_dimensions(rng):
    keypair = gentrap(2, 10, 8, rng)
    with pytest.raises(DimensionError):
        invert(keypair.A, keypair.trapdoor, ZqVector.zeros(9, 8))


def test_implied_constant_reproduces_the_radius(rng):
    n, q = 2, 64
    trapdoor = gentrap(n, 16, q, rng).trapdoor
    C = trapdoor.implied_constant(n, q)
    assert q / (C * math.sqrt(n * math.log2(q))) == pytest.approx(trapdoor.decoding_radius(q))


def test_honest_preset_radius_meets_the_trapdoor_bound(honest_params, rng):
    p = honest_params
    trapdoor = gentrap(p.n, p.m, p.q, rng).trapdoor
    bound = p.q / (p.C * math.sqrt(p.n * math.log2(p.q)))
    assert trapdoor.decoding_radius(p.q) >= bound


def test_baseline_preset_radius_implies_a_larger_constant(baseline_params, rng):
    p = baseline_params
    trapdoor = gentrap(p.n, p.m, p.q, rng).trapdoor
    assert trapdoor.decoding_radius(p.q) == pytest.approx(1024 / math.sqrt(17))
    assert trapdoor.implied_constant(p.n, p.q) == pytest.approx(1.19, abs=0.01)
    assert trapdoor.implied_constant(p.n, p.q) > p.C


def test_bruteforce_finds_exact_preimage(rng):
    A = ZqMatrix.uniform(6, 2, 16, rng)
    x = ZqVector(16, (3, 11))
    assert invert_bruteforce(A, A.mul_vec(x), 0.5) == x


def test_bruteforce_far_target_is_none():
    A = ZqMatrix.from_rows([[2, 0], [0, 2]], 8)
    assert invert_bruteforce(A, ZqVector(8, (1, 1)), 1.0) is None


def test_bruteforce_ambiguity_is_an_error():
    A = ZqMatrix.from_rows([[0, 0], [0, 0]], 8)
    with pytest.raises(AmbiguousPreimage):
        invert_bruteforce(A, ZqVector.zeros(2, 8), 1.0)


def test_bruteforce_size_guard():
    A = ZqMatrix.from_rows([[1, 0, 0, 0, 0]], 1 << 6)
    with pytest.raises(SizeGuardError):
        invert_bruteforce(A, ZqVector.zeros(1, 1 << 6), 1.0)


def test_distance_examples():
    assert matrix_distance_bruteforce(ZqMatrix.from_rows([[0, 0], [0, 0], [0, 0]], 8)) == 0
    assert matrix_distance_bruteforce(ZqMatrix.from_rows([[1, 0], [0, 1]], 5)) == 1


def test_distance_matches_independent_enumeration(rng):
    q = 8
    A = ZqMatrix.uniform(5, 2, q, rng)
    best = math.inf
    for x in itertools.product(reversed(range(q)), repeat=2):
        if any(x):
            best = min(best, A.mul_vec(ZqVector(q, x)).norm())
    assert matrix_distance_bruteforce(A) == pytest.approx(best)
