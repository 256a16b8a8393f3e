"""Create the run-ledger tables."""
import logging

from sqlalchemy.engine import Engine

from qlwe.db.base import Base
from qlwe.db.session import engine as default_engine

logger = logging.getLogger(__name__)


def init_db(engine: Engine = default_engine) -> None:
    Base.metadata.create_all(bind=engine)
    logger.info("run ledger ready at %s", engine.url)


if __name__ == "__main__":
    init_db()
