import numpy as np
import pytest

from qlwe.harness.presets import builtin_preset
from qlwe.schemas.params import ProtocolParams
from qlwe.zq_lattice.validation import LweInstance, generate_keypair, make_instance, validate_instance


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240521)


@pytest.fixture
def tiny_params() -> ProtocolParams:
    return builtin_preset("tiny").params


@pytest.fixture
def closeness_params() -> ProtocolParams:
    return builtin_preset("closeness").params


@pytest.fixture
def honest_params() -> ProtocolParams:
    return builtin_preset("honest").params


@pytest.fixture
def baseline_params() -> ProtocolParams:
    return builtin_preset("baseline").params


def find_validated_instance(params: ProtocolParams, seeds=range(200)) -> LweInstance:
    """First seeded instance that lies in K_{B_V}, with its distance cached."""
    for seed in seeds:
        rng = np.random.default_rng(seed)
        k = make_instance(generate_keypair(params, rng), params, rng)
        report = validate_instance(k, params)
        if report.in_K and report.fully_checked:
            return k.with_distance(report.distance.value)
    raise AssertionError("no validated instance in the seed range")


@pytest.fixture
def closeness_instance(closeness_params) -> LweInstance:
    return find_validated_instance(closeness_params)


@pytest.fixture
def small_protocol_params() -> ProtocolParams:
    """Even n with an enumerable |Φ⟩ for the full simulation path."""
    return ProtocolParams(n=2, m=2, q=16, B_V=1, C=1, epsilon=0.5)


@pytest.fixture
def db_engine():
    """In-memory run ledger shared across connections."""
    from sqlalchemy import create_engine
    from sqlalchemy.pool import StaticPool

    from qlwe.db.base import Base

    engine = create_engine("sqlite://", connect_args={"check_same_thread": False}, poolclass=StaticPool)
    Base.metadata.create_all(bind=engine)
    yield engine
    engine.dispose()


@pytest.fixture
def db(db_engine):
    from sqlalchemy.orm import sessionmaker

    session = sessionmaker(autocommit=False, autoflush=False, bind=db_engine)()
    try:
        yield session
    finally:
        session.close()


@pytest.fixture
def ledger(db_engine, monkeypatch):
    """Point the CLI's ledger session at the in-memory engine."""
    from sqlalchemy.orm import sessionmaker

    from qlwe.cli import deps

    factory = sessionmaker(autocommit=False, autoflush=False, bind=db_engine)

    def get_test_db():
        session = factory()
        try:
            yield session
        finally:
            session.close()

    monkeypatch.setattr(deps, "engine", db_engine)
    monkeypatch.setattr(deps, "get_db", get_test_db)
    return factory
