"""Shared helpers for the command modules: presets, seeds, ledger sessions, exit codes."""
import functools
import logging
from contextlib import contextmanager
from typing import Iterator, Optional

import click
from pydantic import BaseModel
from sqlalchemy.orm import Session

from qlwe.core.config import settings
from qlwe.core.exceptions import (
    CircuitValidationError,
    ConfigError,
    ParameterError,
    PreconditionViolation,
    QlweError,
    ReplayMismatch,
    SizeGuardError,
)
from qlwe.db.scripts.init_db import init_db
from qlwe.db.session import engine, get_db
from qlwe.harness.presets import load_config
from qlwe.schemas.preset import PresetConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2

# Library failures and the exit code each one maps to
ERROR_EXIT_CODES = (
    (ReplayMismatch, EXIT_CHECK_FAILED),
    (ConfigError, EXIT_USAGE),
    (SizeGuardError, EXIT_USAGE),
    (PreconditionViolation, EXIT_USAGE),
    (CircuitValidationError, EXIT_USAGE),
    (ParameterError, EXIT_USAGE),
)


def exit_code_for(exc: QlweError) -> int:
    for error_type, code in ERROR_EXIT_CODES:
        if isinstance(exc, error_type):
            return code
    return EXIT_CHECK_FAILED


def handle_errors(command):
    """Turn library errors into a one-line message and the matching exit code."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except QlweError as exc:
            code = exit_code_for(exc)
            click.echo(f"error: {exc}", err=True)
            logger.debug("exiting with %d after %s", code, type(exc).__name__)
            raise click.exceptions.Exit(code) from exc

    return wrapper


def load_preset(params: str) -> PresetConfig:
    return load_config(params)


def resolve_seed(seed: Optional[int]) -> int:
    return settings.SEED if seed is None else seed


def echo_json(model: BaseModel) -> None:
    click.echo(model.model_dump_json(indent=2))


@contextmanager
def ledger_session() -> Iterator[Session]:
    """Session on the run ledger, creating its tables on first use."""
    init_db(engine)
    db_gen = get_db()
    db = next(db_gen)
    try:
        yield db
    finally:
        db_gen.close()
