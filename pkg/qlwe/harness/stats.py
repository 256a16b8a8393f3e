"""Interval estimates, goodness-of-fit and distribution distances for the harness."""
import math
from collections import Counter
from typing import Iterable, Mapping, Sequence

from scipy.stats import binom, binomtest, chi2, chisquare


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    ci = binomtest(successes, trials).proportion_ci(confidence_level=confidence, method="wilson")
    return max(0.0, float(ci.low)), min(1.0, float(ci.high))


def chi_square_critical(df: int, level: float = 0.01) -> float:
    """Upper `level` point of the chi-square law with `df` degrees of freedom."""
    return float(chi2.isf(level, df))


def uniformity_statistic(counts: Sequence[int]) -> tuple[float, float]:
    """Pearson statistic and p-value of observed counts against the uniform law."""
    result = chisquare(counts)
    return float(result.statistic), float(result.pvalue)


def total_variation(p: Mapping, q: Mapping) -> float:
    keys = set(p) | set(q)
    return 0.5 * math.fsum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def empirical_law(samples: Iterable) -> dict:
    counts = Counter(samples)
    total = sum(counts.values())
    return {k: v / total for k, v in counts.items()}


def binomial_sigma(p: float, trials: int) -> float:
    """Standard deviation of an empirical rate over `trials` draws."""
    return float(binom.std(trials, p)) / trials
