from __future__ import annotations

from contextlib import contextmanager
from typing import List

from sqlalchemy import func, select
from sqlalchemy.orm import Session

from ..errors import NotFoundError
from ..repository_base import RepositoryBase, RunRecord


class SqlalchemyRepository(RepositoryBase):
    """
    Run history stored through an SqlAlchemy session (the repository's context).
    """

    def __init__(self, context: Session):
        super().__init__(context)
        self._session = context

    def add(self, obj: RunRecord) -> None:
        if not isinstance(obj, RunRecord):
            raise TypeError(f"model {type(obj)} is not valid for this repository")
        self._session.add(obj)
        # flush so the pk is assigned before the unit of work ends
        self._session.flush()

    def get(self, pk: int) -> RunRecord:
        record = self._session.get(RunRecord, pk)
        if record is None:
            raise NotFoundError(f"no run with id {pk}")
        return record

    def all(self, command: str = None, limit: int = None) -> List[RunRecord]:
        query = select(RunRecord)
        if command is not None:
            query = query.where(RunRecord.command.startswith(command))
        if limit is not None:
            query = query.order_by(RunRecord.pk.desc()).limit(max(limit, 0))
            return list(reversed(self._session.scalars(query).all()))
        return list(self._session.scalars(query.order_by(RunRecord.pk)).all())

    def count(self) -> int:
        return self._session.scalar(select(func.count()).select_from(RunRecord))

    def remove(self, obj: RunRecord) -> None:
        if obj.pk is None:
            raise ValueError(f"model {obj} was never added to the repository")
        self._session.delete(obj)
        self._session.flush()

    @contextmanager
    def uow(self):
        try:
            yield
            self._session.commit()
        except Exception:
            self._session.rollback()
            raise
