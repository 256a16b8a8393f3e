import math

import numpy as np
import pytest

from qlwe.harness.stats import empirical_law, total_variation
from qlwe.schemas.params import GaussianParams
from qlwe.zq_lattice.gaussian import (
    gaussian_law,
    sample_error_vector,
    sample_gaussian_array,
    sample_truncated_gaussian,
)


def test_draws_respect_truncation(rng):
    params = GaussianParams(q=64, B=2.5)
    draws = [sample_truncated_gaussian(params, rng) for _ in range(2000)]
    assert max(abs(x) for x in draws) <= 2


def test_law_at_q7_b1():
    law = gaussian_law(GaussianParams(q=7, B=1))
    assert set(law) == {-1, 0, 1}
    assert law[0] == pytest.approx(1 / (1 + 2 * math.exp(-math.pi)), abs=1e-12)
    assert law[0] == pytest.approx(0.9205, abs=1e-4)
    assert law[1] == pytest.approx(law[-1], abs=1e-15)


def test_law_is_clipped_by_the_modulus():
    law = gaussian_law(GaussianParams(q=4, B=10))
    assert set(law) == {-1, 0, 1, 2}


@pytest.mark.parametrize("q, B", [(64, 1), (1 << 26, 1), (4096, 1), (16, 3)])
def test_empirical_law_close_in_total_variation(q, B, rng):
    params = GaussianParams(q=q, B=B)
    samples = sample_gaussian_array(params, 100_000, rng).tolist()
    assert total_variation(empirical_law(samples), gaussian_law(params)) < 0.01


def test_error_vector_is_canonical(rng):
    e = sample_error_vector(GaussianParams(q=8, B=1), 50, rng)
    assert len(e) == 50
    assert set(e.coords) <= {7, 0, 1}
    assert e.max_norm() <= 1


def test_gaussian_params_reject_bad_width():
    with pytest.raises(ValueError):
        GaussianParams(q=8, B=0)
