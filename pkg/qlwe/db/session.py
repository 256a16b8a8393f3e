from sqlalchemy import create_engine
from sqlalchemy.orm import declarative_base, sessionmaker

from qlwe.core.config import settings

# SQLite needs cross-thread access for the worker pool
connect_args = {"check_same_thread": False} if settings.DATABASE_URL.startswith("sqlite") else {}

# Create a database engine
engine = create_engine(settings.DATABASE_URL, connect_args=connect_args)

# Create a custom session class
SessionLocal = sessionmaker(autocommit=False, autoflush=False, bind=engine)

# Base class for SQLAlchemy models
Base = declarative_base()


# Yields a session and always closes it
def get_db():
    db = SessionLocal()
    try:
        yield db
    finally:
        db.close()
