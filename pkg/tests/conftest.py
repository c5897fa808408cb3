from contextlib import contextmanager
from typing import List

import numpy as np
import pytest
from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from bellgames.catalog import builtin_game
from bellgames.errors import NotFoundError
from bellgames.repository_base import RepositoryBase, RunRecord
from bellgames.sqlsorcery import metadata

PROPERTY_SEED = 20150101


class MemoryRepository(RepositoryBase):
    """
    Run history kept in a list; removed records leave a None behind so pks never move.
    """

    def __init__(self, context=None):
        super().__init__(context)
        self._items: List[RunRecord] = []

    def _verify_obj(self, obj: RunRecord):
        if not isinstance(obj, RunRecord):
            raise TypeError(f"model {type(obj)} is not valid for this repository")

    def add(self, obj: RunRecord) -> None:
        self._verify_obj(obj)
        if obj.pk is None:
            self._items.append(obj)
            obj.pk = len(self._items)
        else:
            self._items[obj.pk - 1] = obj

    def get(self, pk: int) -> RunRecord:
        if not 1 <= pk <= len(self._items) or self._items[pk - 1] is None:
            raise NotFoundError(f"no run with id {pk}")
        return self._items[pk - 1]

    def all(self, command: str = None, limit: int = None) -> List[RunRecord]:
        records = [item for item in self._items if item is not None]
        if command is not None:
            records = [record for record in records if record.command.startswith(command)]
        if limit is not None:
            records = records[-limit:] if limit > 0 else []
        return records

    def remove(self, obj: RunRecord) -> None:
        self._verify_obj(obj)
        if obj.pk is None:
            raise ValueError(f"model {obj} was never added to the repository")
        self._items[obj.pk - 1] = None

    @contextmanager
    def uow(self):
        yield


@pytest.fixture
def memory_repository() -> MemoryRepository:
    return MemoryRepository()


@pytest.fixture(scope="module")
def engine() -> Engine:
    """
    Create and setup an sqlite-in-memory engine
    """

    engine = create_engine("sqlite:///:memory:")
    # Create the run history tables declared in bellgames.sqlsorcery
    metadata.create_all(engine)
    # `engine` doesn"t manage a connection itself
    return engine


@pytest.fixture(scope="module")
def sql_session(engine: Engine) -> Session:
    """
    Create and return an sqlalchemy ORM session
    :param engine: The SQL engine to create bind a session to
    """

    engine_session_maker = sessionmaker(bind=engine)
    session = engine_session_maker()
    yield session
    session.close()


@pytest.fixture(scope="module")
def game1():
    return builtin_game("game1")


@pytest.fixture(scope="module")
def game2():
    return builtin_game("game2")


@pytest.fixture(scope="module")
def game3():
    return builtin_game("game3")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(PROPERTY_SEED)
