from pathlib import Path

import click

from qlwe.cli.deps import EXIT_CHECK_FAILED, echo_json, handle_errors
from qlwe.harness.transcripts import replay_transcripts


@click.command(help="Re-run the verifier on a transcript log and compare its verdicts.")
@click.argument("transcripts", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--strict", is_flag=True, help="Stop at the first mismatch")
@handle_errors
def replay(transcripts: Path, strict: bool) -> None:
    result = replay_transcripts(transcripts, strict=strict)
    echo_json(result)
    if not result.ok:
        raise click.exceptions.Exit(EXIT_CHECK_FAILED)
