"""
Run reports: what a command was asked, a digest of its inputs, and everything it computed.
"""
from __future__ import annotations

import dataclasses
import datetime
import hashlib
import json
from fractions import Fraction
from typing import Any, Dict, Optional

import numpy as np

from .game import PureProfile
from .utils import AttrDict


def inputs_digest(*texts: str) -> str:
    """
    SHA-1 over the canonical text form of every input of a run.
    """
    sha1er = hashlib.sha1()
    for text in texts:
        sha1er.update(text.encode("utf-8"))
        sha1er.update(b"\0")
    return sha1er.hexdigest()


class ReportJsonEncoder(json.JSONEncoder):
    def default(self, obj):
        if isinstance(obj, Fraction):
            return f"{obj.numerator}/{obj.denominator}"
        if isinstance(obj, (np.integer,)):
            return int(obj)
        if isinstance(obj, (np.floating,)):
            return float(obj)
        if isinstance(obj, (complex, np.complexfloating)):
            return [float(obj.real), float(obj.imag)]
        if isinstance(obj, np.ndarray):
            # object arrays hold Fractions, encoded again element by element
            return obj.tolist()
        if isinstance(obj, PureProfile):
            return str(obj)
        if isinstance(obj, datetime.datetime):
            iso = obj.isoformat()
            if obj.tzinfo is None:
                iso += "+00:00"
            return iso
        try:
            return list(obj)
        except TypeError:
            pass

        return super().default(obj)


def dumps(payload: Any, **kwargs) -> str:
    return json.dumps(payload, cls=ReportJsonEncoder, **kwargs)


@dataclasses.dataclass
class RunReport:
    """
    :param command: the command line as typed (argv joined by spaces).
    :param inputs_digest: see :py:func:`inputs_digest`.
    :param results: the computed values; exact rationals stay Fractions until encoded.
    :param duration: wall clock seconds.
    """

    command: str
    inputs_digest: str
    results: AttrDict = dataclasses.field(default_factory=AttrDict)
    duration: float = 0.0
    version: str = ""
    seed: Optional[int] = None
    created: datetime.datetime = dataclasses.field(
        default_factory=lambda: datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None),
    )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "duration": self.duration,
            "version": self.version,
            "seed": self.seed,
            "created": self.created,
        }

    def to_json(self, indent: int = 2) -> str:
        return dumps(self.to_dict(), indent=indent, sort_keys=True)
