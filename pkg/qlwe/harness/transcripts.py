"""JSON-lines transcript streams and their replay.

Line format: {"trial": int, "step": 0..5, "payload": {...}}. Step 0 is a
single header carrying params, seed and prover; steps 1 to 5 of each trial
are (A, u), y, r, the response and the verdict.
"""
from __future__ import annotations

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator, List, Tuple, Union

from pydantic import ValidationError

from qlwe.core.config import settings
from qlwe.core.exceptions import ConfigError, ReplayMismatch
from qlwe.core.seeding import derive_rng
from qlwe.protocol.rates import VERIFIER_TAG
from qlwe.protocol.verifier import Verifier
from qlwe.schemas.params import ProtocolParams
from qlwe.schemas.transcript import (
    PublicKey,
    ReplayReport,
    Transcript,
    TranscriptHeader,
    WireMessage,
)

logger = logging.getLogger(__name__)


def transcript_messages(t: Transcript) -> Iterator[WireMessage]:
    yield WireMessage(trial=t.trial, step=1, payload=t.public_key.model_dump(mode="json"))
    yield WireMessage(trial=t.trial, step=2, payload={"y": t.y})
    yield WireMessage(trial=t.trial, step=3, payload={"r": t.r})
    yield WireMessage(trial=t.trial, step=4, payload=t.response.model_dump(mode="json"))
    yield WireMessage(
        trial=t.trial,
        step=5,
        payload={
            "verdict": t.verdict.model_dump(mode="json"),
            "prover": t.prover,
            "simulation_only": t.simulation_only,
            "elapsed": t.elapsed,
        },
    )


class TranscriptWriter:
    """Append-only sink; usable as the ``sink`` of a rate estimate."""

    def __init__(self, path: Union[str, Path], params: ProtocolParams, seed: int, prover: str, trials: int):
        self.path = Path(path)
        self._file = self.path.open("w", encoding="utf-8")
        header = TranscriptHeader(params=params, seed=seed, prover=prover, trials=trials, version=settings.VERSION)
        self._write(WireMessage(trial=0, step=0, payload=header.model_dump(mode="json", by_alias=True)))
        self.count = 0

    def _write(self, message: WireMessage) -> None:
        self._file.write(json.dumps(message.model_dump(mode="json", exclude_none=True), sort_keys=True) + "\n")

    def __call__(self, t: Transcript) -> None:
        for message in transcript_messages(t):
            self._write(message)
        self.count += 1

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "TranscriptWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_transcripts(
        path: Union[str, Path], transcripts: Iterable[Transcript], params: ProtocolParams, seed: int, prover: str
) -> Path:
    transcripts = list(transcripts)
    with TranscriptWriter(path, params, seed, prover, len(transcripts)) as writer:
        for t in transcripts:
            writer(t)
    return Path(path)


def read_transcripts(path: Union[str, Path]) -> Tuple[TranscriptHeader, List[Transcript]]:
    """Parse a stream back into its header and per-trial transcripts."""
    header = None
    steps: dict[int, dict[int, dict]] = {}
    try:
        with Path(path).open(encoding="utf-8") as fh:
            for number, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                message = WireMessage.model_validate_json(line)
                if message.step == 0:
                    header = TranscriptHeader.model_validate(message.payload)
                else:
                    steps.setdefault(message.trial, {})[message.step] = message.payload
    except (OSError, ValidationError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read transcripts from {path}: {exc}") from exc
    if header is None:
        raise ConfigError(f"{path} has no header line")

    transcripts = []
    for trial in sorted(steps):
        parts = steps[trial]
        missing = [s for s in range(1, 6) if s not in parts]
        if missing:
            raise ConfigError(f"trial {trial} is missing steps {missing}")
        final = parts[5]
        transcripts.append(Transcript(
            trial=trial,
            seed=header.seed,
            prover=final.get("prover", header.prover),
            public_key=PublicKey.model_validate(parts[1]),
            y=parts[2]["y"],
            r=parts[3]["r"],
            response=parts[4],
            verdict=final["verdict"],
            simulation_only=final.get("simulation_only", False),
            elapsed=final.get("elapsed", 0.0),
        ))
    return header, transcripts


def replay_transcripts(path: Union[str, Path], *, strict: bool = False) -> ReplayReport:
    """
    Rebuild every trial's verifier from the header seed and re-decide the logged messages.

    Args:
        path: Transcript stream
        strict: Raise ReplayMismatch on the first disagreement

    Returns:
        ReplayReport: Per-trial agreement
    """
    header, transcripts = read_transcripts(path)
    report = ReplayReport()
    for t in transcripts:
        report.trials += 1
        verifier = Verifier(header.params, derive_rng(header.seed, VERIFIER_TAG, t.trial))
        problem = None
        if verifier.public_key_message() != t.public_key:
            problem = "public key differs"
        else:
            verifier.commit(t.y)
            r = verifier.challenge()
            if r != t.r:
                problem = f"challenge {r} but transcript has {t.r}"
            else:
                verdict = verifier.decide(t.response)
                if verdict != t.verdict:
                    problem = f"verdict {verdict.reason.value} but transcript has {t.verdict.reason.value}"
        if problem is None:
            report.matched += 1
            continue
        message = f"trial {t.trial}: {problem}"
        if strict:
            raise ReplayMismatch(message)
        report.mismatches.append(message)
    logger.info("replayed %d trials, %d mismatches", report.trials, len(report.mismatches))
    return report
