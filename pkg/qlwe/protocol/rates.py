"""Seeded protocol rounds and pass-rate estimation."""
from __future__ import annotations

import logging
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional

from qlwe.core.config import settings
from qlwe.core.exceptions import ParameterError
from qlwe.core.seeding import derive_rng
from qlwe.harness.stats import wilson_interval
from qlwe.protocol.provers import Prover, make_prover
from qlwe.protocol.verifier import Verifier
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.report import ChallengeStats, PassRateStats
from qlwe.schemas.transcript import Transcript

logger = logging.getLogger(__name__)

VERIFIER_TAG = "verifier"
PROVER_TAG = "prover"


def verifier_round(verifier: Verifier, prover: Prover, *, trial: int = 0, seed: int = 0) -> Transcript:
    """Run steps 1 to 5 between a fresh verifier and a prover."""
    start = time.perf_counter()
    instance = verifier.instance if prover.needs_witness else verifier.public_key()
    y = prover.commit(instance)
    verifier.commit(y)
    r = verifier.challenge()
    response = prover.respond(r)
    verdict = verifier.decide(response)
    return Transcript(
        trial=trial,
        seed=seed,
        prover=prover.name,
        public_key=verifier.public_key_message(),
        y=list(y.coords),
        r=r,
        response=response,
        verdict=verdict,
        simulation_only=prover.simulation_only,
        elapsed=time.perf_counter() - start,
    )


def run_trial(
        prover: str, params: ProtocolParams, seed: int, trial: int, prover_options: Optional[Dict[str, Any]] = None
) -> Transcript:
    verifier = Verifier(params, derive_rng(seed, VERIFIER_TAG, trial))
    p = make_prover(prover, params, derive_rng(seed, PROVER_TAG, trial), **(prover_options or {}))
    return verifier_round(verifier, p, trial=trial, seed=seed)


def run_trials(
        prover: str,
        params: ProtocolParams,
        trials: int,
        seed: int,
        *,
        workers: int = 1,
        prover_options: Optional[Dict[str, Any]] = None,
) -> List[Transcript]:
    """Transcripts ordered by trial id whatever the worker count."""
    if trials < 1:
        raise ParameterError(f"trials must be >= 1, got {trials}")

    def one(trial: int) -> Transcript:
        return run_trial(prover, params, seed, trial, prover_options)

    if workers <= 1:
        return [one(i) for i in range(trials)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, range(trials)))


def summarize(
        transcripts: List[Transcript], *, seed: int, repetitions: int = 1, elapsed: float = 0.0
) -> PassRateStats:
    """Aggregate transcripts into rates; recomputable from a transcript file."""
    if not transcripts:
        raise ParameterError("no transcripts to summarize")
    accepted = sum(t.verdict.accepted for t in transcripts)
    low, high = wilson_interval(accepted, len(transcripts))
    per_challenge = {"0": ChallengeStats(), "1": ChallengeStats()}
    for t in transcripts:
        stats = per_challenge[str(t.r)]
        stats.trials += 1
        stats.accepted += int(t.verdict.accepted)
    amplified = None
    if repetitions > 1:
        groups = [transcripts[i:i + repetitions] for i in range(0, len(transcripts) - repetitions + 1, repetitions)]
        if groups:
            amplified = sum(all(t.verdict.accepted for t in g) for g in groups) / len(groups)
    return PassRateStats(
        prover=transcripts[0].prover,
        seed=seed,
        trials=len(transcripts),
        accepted=accepted,
        rate=accepted / len(transcripts),
        ci_low=low,
        ci_high=high,
        per_challenge=per_challenge,
        reasons=dict(Counter(t.verdict.reason.value for t in transcripts)),
        repetitions=repetitions,
        amplified_rate=amplified,
        simulation_only=any(t.simulation_only for t in transcripts),
        elapsed=elapsed,
    )


def estimate_pass_rate(
        prover: str,
        params: ProtocolParams,
        trials: int,
        seed: Optional[int] = None,
        *,
        workers: Optional[int] = None,
        repetitions: int = 1,
        prover_options: Optional[Dict[str, Any]] = None,
        sink: Optional[Callable[[Transcript], None]] = None,
) -> PassRateStats:
    """
    Accept rate of ``prover`` over seeded trials.

    Args:
        prover: Registered prover name
        params: Protocol parameters
        trials: Number of rounds
        seed: Master seed, defaults to the configured seed
        workers: Thread pool size
        repetitions: Group size for the all-rounds-accept rate
        prover_options: Keyword arguments for the prover
        sink: Receives every transcript in trial order

    Returns:
        PassRateStats: Rate with Wilson interval, per-challenge and reason breakdowns
    """
    seed = settings.SEED if seed is None else seed
    workers = settings.WORKERS if workers is None else workers
    if repetitions < 1:
        raise ParameterError(f"repetitions must be >= 1, got {repetitions}")
    start = time.perf_counter()
    transcripts = run_trials(prover, params, trials, seed, workers=workers, prover_options=prover_options)
    if sink is not None:
        for t in transcripts:
            sink(t)
    stats = summarize(transcripts, seed=seed, repetitions=repetitions, elapsed=time.perf_counter() - start)
    logger.info(
        "%s: %d/%d accepted (%.4f, 95%% CI [%.4f, %.4f])",
        prover, stats.accepted, stats.trials, stats.rate, stats.ci_low, stats.ci_high,
    )
    return stats
