from typing import Generic, List, Optional, Type, TypeVar
from uuid import UUID

from pydantic import BaseModel
from sqlalchemy.orm import Session

from qlwe.models.base import BaseModel as DBBaseModel

# Row type and the schema a row is recorded from
ModelType = TypeVar("ModelType", bound=DBBaseModel)
CreateSchemaType = TypeVar("CreateSchemaType", bound=BaseModel)


class CRUDBase(Generic[ModelType, CreateSchemaType]):
    """
    Append-only ledger access: rows are recorded once and read back, never edited.
    """

    def __init__(self, model: Type[ModelType]):
        """
        Bind the ledger to its table.

        Args:
            model: SQLAlchemy model class of the ledger rows
        """
        self.model = model

    def get(self, db: Session, id: UUID) -> Optional[ModelType]:
        return db.get(self.model, id)

    def get_multi(
            self, db: Session, *, skip: int = 0, limit: int = 100
    ) -> List[ModelType]:
        """
        Page through recorded rows, newest first

        Args:
            db: Database session
            skip: Rows to skip from the newest
            limit: Maximum rows in the page

        Returns:
            List[ModelType]: The page of rows
        """
        return db.query(self.model).order_by(self.model.created_at.desc()).offset(skip).limit(limit).all()

    def create(self, db: Session, *, obj_in: CreateSchemaType) -> ModelType:
        db_obj = self.model(**obj_in.model_dump())
        db.add(db_obj)
        db.commit()
        db.refresh(db_obj)
        return db_obj
