"""Rewinding extraction of (b, x, d, c) tuples."""
from __future__ import annotations

import logging
from collections import Counter
from typing import Optional

from qlwe.core.config import settings
from qlwe.core.seeding import derive_rng
from qlwe.harness.stats import wilson_interval
from qlwe.protocol.gsets import classify_tuple
from qlwe.protocol.provers import Prover, make_prover
from qlwe.protocol.rates import PROVER_TAG, VERIFIER_TAG
from qlwe.protocol.verifier import Verifier
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.report import ExtractionStats
from qlwe.schemas.transcript import ExtractionResult, HardcoreTuple, TupleClass

logger = logging.getLogger(__name__)


def extract_hardcore_tuple(prover: Prover, verifier: Verifier, *, trial: int = 0) -> ExtractionResult:
    """
    Commit once, answer r = 0, rewind, answer r = 1.

    Rewinding a quantum prover clones simulator state, so every result is
    simulation-only.
    """
    instance = verifier.instance if prover.needs_witness else verifier.public_key()
    y = prover.commit(instance)
    verifier.commit(y)
    saved = prover.snapshot()
    preimage = prover.respond(0)
    prover.restore(saved)
    equation = prover.respond(1)
    t = HardcoreTuple(b=preimage.b, x=preimage.x, d=equation.d, c=equation.c)
    return ExtractionResult(trial=trial, hardcore=t, label=classify_tuple(t, verifier.secret))


def estimate_extraction(
        prover: str, params: ProtocolParams, trials: int, seed: Optional[int] = None
) -> ExtractionStats:
    seed = settings.SEED if seed is None else seed
    labels = Counter()
    for trial in range(trials):
        verifier = Verifier(params, derive_rng(seed, VERIFIER_TAG, trial))
        p = make_prover(prover, params, derive_rng(seed, PROVER_TAG, trial))
        labels[extract_hardcore_tuple(p, verifier, trial=trial).label] += 1
    in_h = labels[TupleClass.IN_H]
    low, high = wilson_interval(in_h, trials)
    logger.info("%s extraction: %s", prover, {label.value: count for label, count in labels.items()})
    return ExtractionStats(
        prover=prover,
        seed=seed,
        trials=trials,
        counts={label.value: labels[label] for label in TupleClass},
        in_h_rate=in_h / trials,
        ci_low=low,
        ci_high=high,
    )
