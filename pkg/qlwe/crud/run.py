from typing import List

from sqlalchemy.orm import Session

from qlwe.crud.base import CRUDBase
from qlwe.models.run import RunRecord
from qlwe.schemas.report import RunReport
from qlwe.schemas.run import RunRecordCreate


class CRUDRun(CRUDBase[RunRecord, RunRecordCreate]):
    """
    CRUD operations for the run ledger
    """

    def create_from_report(self, db: Session, *, report: RunReport) -> RunRecord:
        """
        Record a finished suite run

        Args:
            db: Database session
            report: The run's report

        Returns:
            RunRecord: The stored row
        """
        stats = report.stats
        return self.create(db, obj_in=RunRecordCreate(
            kind=report.kind.value,
            preset=report.preset,
            prover=report.prover,
            seed=str(report.seed),
            trials=report.trials,
            accepted=stats.accepted if stats else None,
            accept_rate=stats.rate if stats else None,
            ci_low=stats.ci_low if stats else None,
            ci_high=stats.ci_high if stats else None,
            passed=report.passed,
            config_hash=report.config_hash,
            code_version=report.version,
            report_json=report.model_dump_json(),
        ))

    def get_by_config_hash(self, db: Session, *, config_hash: str) -> List[RunRecord]:
        return (
            db.query(RunRecord)
            .filter(RunRecord.config_hash == config_hash)
            .order_by(RunRecord.created_at.desc())
            .all()
        )

    def get_recent(self, db: Session, *, kind: str = None, limit: int = 20) -> List[RunRecord]:
        """
        Latest runs, optionally of one suite kind

        Args:
            db: Database session
            kind: Suite kind filter
            limit: Maximum number of rows

        Returns:
            List[RunRecord]: Newest first
        """
        query = db.query(RunRecord)
        if kind is not None:
            query = query.filter(RunRecord.kind == kind)
        return query.order_by(RunRecord.created_at.desc()).limit(limit).all()


# Shared ledger accessor
run = CRUDRun(RunRecord)
