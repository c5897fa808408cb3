import contextlib
import logging

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, sessionmaker

from .sqlsorcery import metadata

logger = logging.getLogger(__name__)


def create_all(engine: Engine):
    metadata.create_all(bind=engine)


def raw_sql_session(engine: Engine) -> Session:
    engine_session_maker = sessionmaker(bind=engine)
    session = engine_session_maker()
    return session


@contextlib.contextmanager
def sql_session(engine: Engine):
    session = raw_sql_session(engine=engine)
    try:
        yield session
    except Exception as e:
        session.rollback()
        raise e
    finally:
        session.close()


def build_sqlite_uri(db_path: str) -> str:
    return f"sqlite:///{db_path}"


def open_history(db_path: str) -> Engine:
    """
    Engine on a SQLite history file, creating the schema when missing.
    """
    engine = create_engine(build_sqlite_uri(db_path))
    create_all(engine)
    logger.debug("opened run history %s", db_path)
    return engine
