from .sqlalchemy_repository import SqlalchemyRepository
from .sqlsorcery import mapper_registry, metadata, runs_table
from .sqlutils import (
    build_sqlite_uri,
    create_all,
    open_history,
    raw_sql_session,
    sql_session,
)

__all__ = [
    "SqlalchemyRepository",
    "mapper_registry",
    "metadata",
    "runs_table",
    "raw_sql_session",
    "sql_session",
    "build_sqlite_uri",
    "create_all",
    "open_history",
]
