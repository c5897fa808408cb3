"""
SQL schema of the run history, with :py:class:`RunRecord` mapped imperatively onto it.
"""
from sqlalchemy import Column, DateTime, Float, Integer, MetaData, String, Table, Text
from sqlalchemy.orm import registry

from ..repository_base import RunRecord

# Explicitly state the max length, so sqlalchemy can use MEDIUMTEXT/LONGTEXT in MySQL
_MAX_TEXT_LENGTH = 2 << 23

metadata = MetaData()
mapper_registry = registry(metadata=metadata)

runs_table = Table(
    "bellgames_runs",
    metadata,
    Column("pk", Integer, primary_key=True, autoincrement=True),
    Column("created", DateTime, nullable=False),
    Column("command", Text(_MAX_TEXT_LENGTH), nullable=False),
    Column("inputs_digest", String(40), nullable=False, index=True),
    Column("version", String(32), nullable=False),
    Column("seed", String(20), nullable=True),
    Column("duration", Float, nullable=False),
    Column("payload", Text(_MAX_TEXT_LENGTH), nullable=False),
)

mapper_registry.map_imperatively(RunRecord, runs_table)
