import time
from pathlib import Path
from typing import Optional

import click

from qlwe.cli.deps import EXIT_CHECK_FAILED, echo_json, handle_errors, ledger_session, load_preset, resolve_seed
from qlwe.core.config import settings
from qlwe.crud.run import run as run_crud
from qlwe.harness.presets import config_hash
from qlwe.harness.suites import protocol_checks
from qlwe.harness.transcripts import TranscriptWriter
from qlwe.protocol.provers import PROVERS, QuantumMode
from qlwe.protocol.rates import estimate_pass_rate
from qlwe.schemas.report import RunReport, SuiteKind


@click.command(help="Run seeded protocol rounds and log every transcript.")
@click.option("--params", "params_spec", required=True, help="Preset name or TOML file")
@click.option("--prover", type=click.Choice(sorted(PROVERS)), default="quantum", show_default=True)
@click.option("--trials", type=int, default=None, help="Defaults to the preset's trial count")
@click.option("--seed", type=int, default=None, help="Master seed (default QLWE_SEED)")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="transcripts.jsonl")
@click.option("--workers", type=int, default=None)
@click.option("--repetitions", type=int, default=None)
@click.option("--mode", type=click.Choice([m.value for m in QuantumMode]), default=QuantumMode.AUTO.value,
              show_default=True, help="Quantum prover simulation path")
@click.option("--record/--no-record", default=False, show_default=True, help="Store the result in the run ledger")
@handle_errors
def run(
        params_spec: str,
        prover: str,
        trials: Optional[int],
        seed: Optional[int],
        out: Optional[Path],
        workers: Optional[int],
        repetitions: Optional[int],
        mode: str,
        record: bool,
) -> None:
    preset = load_preset(params_spec)
    params = preset.require_params()
    seed = resolve_seed(seed)
    count = trials or preset.trials.count
    options = {"mode": QuantumMode(mode)} if prover == "quantum" else None
    start = time.perf_counter()
    sink = TranscriptWriter(out, params, seed, prover, count) if out is not None else None
    try:
        stats = estimate_pass_rate(
            prover, params, count, seed,
            workers=workers or preset.trials.workers,
            repetitions=repetitions or preset.trials.repetitions,
            prover_options=options,
            sink=sink,
        )
    finally:
        if sink is not None:
            sink.close()
    report = RunReport(
        kind=SuiteKind.PROTOCOL, preset=preset.name, seed=seed, prover=prover, trials=count,
        stats=stats, checks=protocol_checks(prover, params, stats),
        config_hash=config_hash(preset), version=settings.VERSION, elapsed=time.perf_counter() - start,
    )
    if record:
        with ledger_session() as db:
            run_crud.create_from_report(db, report=report)
    echo_json(report)
    if not report.passed:
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)
