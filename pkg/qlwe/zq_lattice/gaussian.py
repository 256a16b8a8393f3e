"""Truncated discrete Gaussian D_{q,B} by exact inverse-CDF table lookup."""
import math
from functools import lru_cache

import numpy as np

from qlwe.schemas.params import GaussianParams
from qlwe.zq_lattice.zq import ZqVector


@lru_cache(maxsize=64)
def _table(q: int, B: float) -> tuple[np.ndarray, np.ndarray]:
    low, high = -((q + 1) // 2) + 1, q // 2
    radius = math.floor(B)
    support = np.arange(max(low, -radius), min(high, radius) + 1, dtype=np.int64)
    weights = np.exp(-math.pi * support.astype(float) ** 2 / (B * B))
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0
    support.setflags(write=False)
    cdf.setflags(write=False)
    return support, cdf


def gaussian_law(params: GaussianParams) -> dict[int, float]:
    """Exact probabilities of D_{q,B} over its centered support."""
    support, cdf = _table(params.q, float(params.B))
    probs = np.diff(np.concatenate([[0.0], cdf]))
    return {int(x): float(p) for x, p in zip(support, probs)}


def sample_truncated_gaussian(params: GaussianParams, rng: np.random.Generator) -> int:
    """One centered draw x with |x| <= B and Pr[x] ∝ exp(−πx²/B²)."""
    support, cdf = _table(params.q, float(params.B))
    return int(support[np.searchsorted(cdf, rng.random(), side="right")])


def sample_gaussian_array(params: GaussianParams, size: int, rng: np.random.Generator) -> np.ndarray:
    support, cdf = _table(params.q, float(params.B))
    idx = np.searchsorted(cdf, rng.random(size), side="right")
    return support[np.minimum(idx, len(support) - 1)]


def sample_error_vector(params: GaussianParams, length: int, rng: np.random.Generator) -> ZqVector:
    """e ~ D_{q,B}^length, returned in canonical [0,q) form."""
    return ZqVector.reduce(sample_gaussian_array(params, length, rng).tolist(), params.q)
