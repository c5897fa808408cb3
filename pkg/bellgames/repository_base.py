from __future__ import annotations

import abc
import dataclasses
import datetime
import json
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

from .report import RunReport, dumps


@dataclasses.dataclass
class RunRecord:
    """
    A stored run. ``payload`` keeps the encoded results, ``seed`` is text since seeds are unsigned 64-bit.
    """

    command: str
    inputs_digest: str
    version: str
    duration: float
    payload: str
    created: datetime.datetime
    seed: Optional[str] = None
    pk: Optional[int] = None

    @classmethod
    def from_report(cls, report: RunReport) -> RunRecord:
        return cls(
            command=report.command,
            inputs_digest=report.inputs_digest,
            version=report.version,
            duration=report.duration,
            payload=dumps(report.results, sort_keys=True),
            created=report.created,
            seed=None if report.seed is None else str(report.seed),
        )

    @property
    def results(self) -> Dict[str, Any]:
        return json.loads(self.payload)


class RepositoryBase(abc.ABC):
    """
    Base class of the run history repositories - saving and retrieving run records from any backend.
    """

    def __init__(self, context):
        self._context = context

    @abc.abstractmethod
    def add(self, obj: RunRecord) -> None:
        """
        Add a record to the repository, saving it persistently. Sets ``obj.pk``.
        :param obj: the record to add.
        """
        raise NotImplementedError()

    @abc.abstractmethod
    def get(self, pk: int) -> RunRecord:
        """
        :raise NotFoundError: when no record has this pk.
        """
        raise NotImplementedError()

    @abc.abstractmethod
    def all(self, command: str = None, limit: int = None) -> List[RunRecord]:
        """
        Records in insertion order, optionally only those whose command starts with ``command``,
        and at most the last ``limit`` of them.
        """
        raise NotImplementedError()

    @abc.abstractmethod
    def remove(self, obj: RunRecord) -> None:
        raise NotImplementedError()

    def count(self) -> int:
        return len(self.all())

    def last(self) -> Optional[RunRecord]:
        records = self.all(limit=1)
        return records[0] if records else None

    def add_report(self, report: RunReport) -> RunRecord:
        record = RunRecord.from_report(report)
        with self.uow():
            self.add(record)
        return record

    @abc.abstractmethod
    @contextmanager
    def uow(self):
        """
        A unit of work for this repository.
        """
        raise NotImplementedError()
