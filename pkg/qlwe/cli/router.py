import click

from qlwe.cli.commands import depthc, history, keygen, replay, run, suite
from qlwe.core.config import settings
from qlwe.core.logging import configure_logging


@click.group(help=settings.DESCRIPTION)
@click.version_option(settings.VERSION, prog_name=settings.PROJECT_NAME)
@click.option("--log-level", default=settings.LOG_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def cli(log_level: str) -> None:
    configure_logging(log_level)


# Include commands from the command modules
cli.add_command(keygen.keygen)
cli.add_command(run.run)
cli.add_command(suite.suite)
cli.add_command(depthc.depthc)
cli.add_command(replay.replay)
cli.add_command(history.history)
