from pathlib import Path
from typing import Optional

import click

from qlwe.cli.deps import EXIT_CHECK_FAILED, echo_json, handle_errors, ledger_session, load_preset, resolve_seed
from qlwe.crud.run import run as run_crud
from qlwe.harness.suites import run_suite
from qlwe.protocol.provers import PROVERS
from qlwe.schemas.report import SuiteKind


@click.command(help="Run an acceptance battery and write report.json.")
@click.argument("kind", type=click.Choice([k.value for k in SuiteKind]))
@click.option("--params", "params_spec", default="tiny", show_default=True, help="Preset name or TOML file")
@click.option("--seed", type=int, default=None, help="Master seed (default QLWE_SEED)")
@click.option("--prover", type=click.Choice(sorted(PROVERS)), default="quantum", show_default=True)
@click.option("--trials", type=int, default=None)
@click.option("--workers", type=int, default=None)
@click.option("--repetitions", type=int, default=None)
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=None)
@click.option("--record/--no-record", default=False, show_default=True, help="Store the result in the run ledger")
@handle_errors
def suite(
        kind: str,
        params_spec: str,
        seed: Optional[int],
        prover: str,
        trials: Optional[int],
        workers: Optional[int],
        repetitions: Optional[int],
        out_dir: Optional[Path],
        record: bool,
) -> None:
    report = run_suite(
        kind, load_preset(params_spec), resolve_seed(seed),
        prover=prover, trials=trials, workers=workers, repetitions=repetitions, out_dir=out_dir,
    )
    if record:
        with ledger_session() as db:
            run_crud.create_from_report(db, report=report)
    echo_json(report)
    if not report.passed:
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)
