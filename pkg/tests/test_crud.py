import json

from qlwe.crud.run import run as run_crud
from qlwe.schemas.report import CheckResult, PassRateStats, RunReport, SuiteKind
from qlwe.schemas.run import RunRecordRead


def _report(kind=SuiteKind.PROTOCOL, config="a" * 64, passed=True) -> RunReport:
    stats = PassRateStats(prover="pass_r0", seed=3, trials=100, accepted=74, rate=0.74, ci_low=0.65, ci_high=0.81)
    return RunReport(
        kind=kind, preset="baseline", seed=3, prover="pass_r0", trials=100,
        stats=stats if kind == SuiteKind.PROTOCOL else None,
        checks=[CheckResult(name="baseline_rate", passed=passed, value=0.74, threshold=0.75)],
        config_hash=config, version="0.1.0",
    )


def test_create_from_report(db):
    record = run_crud.create_from_report(db, report=_report())
    assert record.id is not None
    assert record.created_at is not None
    assert record.kind == "protocol"
    assert record.seed == "3"
    assert record.accepted == 74
    assert record.accept_rate == 0.74
    assert record.passed is True
    assert json.loads(record.report_json)["stats"]["trials"] == 100
    assert RunRecordRead.model_validate(record).config_hash == "a" * 64


def test_non_protocol_runs_leave_rates_empty(db):
    record = run_crud.create_from_report(db, report=_report(kind=SuiteKind.DEPTH))
    assert record.accept_rate is None
    assert record.ci_low is None


def test_queries(db):
    run_crud.create_from_report(db, report=_report(config="a" * 64))
    run_crud.create_from_report(db, report=_report(config="b" * 64, passed=False))
    run_crud.create_from_report(db, report=_report(kind=SuiteKind.INVARIANTS, config="b" * 64))
    assert len(run_crud.get_by_config_hash(db, config_hash="b" * 64)) == 2
    assert len(run_crud.get_recent(db)) == 3
    assert len(run_crud.get_recent(db, limit=2)) == 2
    assert [r.kind for r in run_crud.get_recent(db, kind="invariants")] == ["invariants"]
    assert len(run_crud.get_multi(db, skip=1)) == 2


def test_ledger_is_append_only(db):
    record = run_crud.create_from_report(db, report=_report())
    assert run_crud.get(db, id=record.id).id == record.id
    assert not hasattr(run_crud, "update")
    assert not hasattr(run_crud, "remove")
