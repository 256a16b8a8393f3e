import json
from typing import Optional

import click

from qlwe.cli.deps import handle_errors, ledger_session
from qlwe.crud.run import run as run_crud
from qlwe.schemas.report import SuiteKind
from qlwe.schemas.run import RunRecordRead


@click.command(help="List recorded runs, newest first.")
@click.option("--kind", type=click.Choice([k.value for k in SuiteKind]), default=None)
@click.option("--config-hash", default=None, help="Only runs of this exact configuration")
@click.option("--limit", type=click.IntRange(min=1), default=20, show_default=True)
@handle_errors
def history(kind: Optional[str], config_hash: Optional[str], limit: int) -> None:
    with ledger_session() as db:
        if config_hash is not None:
            rows = run_crud.get_by_config_hash(db, config_hash=config_hash)[:limit]
        else:
            rows = run_crud.get_recent(db, kind=kind, limit=limit)
        records = [RunRecordRead.model_validate(row).model_dump(mode="json") for row in rows]
    click.echo(json.dumps(records, indent=2))
