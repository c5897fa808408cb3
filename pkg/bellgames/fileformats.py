"""
Line oriented text formats for games, Bell functionals and quantum strategies.

Game::

    game <name> <nx> <ny> <na> <nb>
    prior <x> <y> <num>/<den>
    pay <x> <y> <a> <b> <uA_num>/<uA_den> <uB_num>/<uB_den>

Functional::

    bell <name> <nx> <ny> <na> <nb> <offset_num>/<offset_den>
    bound <num>/<den>                       (optional)
    coef <x> <y> <a> <b> <num>/<den>        (omitted tuples are 0)

Strategy::

    dims <dA> <dB>
    state <re> <im>                         (dA*dB lines, index a*dB+b)
    ameas <x> <k> <re> <im> <re> <im> ...   (basis vector k of Alice's measurement on input x)
    bmeas <y> <l> ...

Inputs are 1-based, outputs and basis indices 0-based. ``#`` starts a comment.
Writers always produce the canonical form, so write(read(write(obj))) == write(obj) byte for byte.
"""
from __future__ import annotations

import logging
import os
from fractions import Fraction
from typing import Dict, Iterator, List, Tuple

import numpy as np

from .bell import BellFunctional
from .errors import ParseError, ValidationError
from .game import GameSpec
from .quantum import ProjectiveMeasurement, QuantumStrategy, StateVector
from .utils.rational import parse_fraction

logger = logging.getLogger(__name__)

Line = Tuple[int, List[str]]


def _lines(text: str) -> Iterator[Line]:
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content.split()


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _float_text(value: float) -> str:
    return repr(float(value))


class _Reader:
    """
    Token helpers that turn every conversion failure into a ParseError on the current line.
    """

    def __init__(self, path: str):
        self.path = path
        self.line = 0

    def error(self, message: str, line: int = None) -> ParseError:
        return ParseError(message, self.path, self.line if line is None else line)

    def expect(self, tokens: List[str], keyword: str, count: int) -> List[str]:
        if tokens[0] != keyword:
            raise self.error(f"expected a '{keyword}' line, got '{tokens[0]}'")
        if len(tokens) != count + 1:
            raise self.error(f"'{keyword}' takes {count} fields (got {len(tokens) - 1})")
        return tokens[1:]

    def integer(self, token: str, low: int = None, high: int = None) -> int:
        try:
            value = int(token)
        except ValueError:
            raise self.error(f"expected an integer, got {token!r}") from None
        if (low is not None and value < low) or (high is not None and value > high):
            raise self.error(f"{value} is out of range [{low}, {high}]")
        return value

    def fraction(self, token: str) -> Fraction:
        try:
            return parse_fraction(token)
        except ValidationError:
            raise self.error(f"expected a rational num/den, got {token!r}") from None

    def real(self, token: str) -> float:
        try:
            value = float(token)
        except ValueError:
            raise self.error(f"expected a decimal number, got {token!r}") from None
        if not np.isfinite(value):
            raise self.error(f"non-finite number {token!r}")
        return value

    def dims(self, tokens: List[str]) -> Tuple[int, int, int, int]:
        return tuple(self.integer(token, low=1) for token in tokens)


def read_game(text: str, path: str = "<string>") -> GameSpec:
    reader = _Reader(path)
    lines = list(_lines(text))
    if not lines:
        raise reader.error("empty game file")
    reader.line, tokens = lines[0]
    name, *dims = reader.expect(tokens, "game", 5)
    nx, ny, na, nb = reader.dims(dims)
    header_line = reader.line

    prior: Dict[Tuple[int, int], Fraction] = {}
    pay: Dict[Tuple[int, int, int, int], Tuple[Fraction, Fraction]] = {}
    for reader.line, tokens in lines[1:]:
        if tokens[0] == "prior":
            fields = reader.expect(tokens, "prior", 3)
            key = (reader.integer(fields[0], 1, nx) - 1, reader.integer(fields[1], 1, ny) - 1)
            if key in prior:
                raise reader.error(f"duplicate prior for inputs ({key[0] + 1}, {key[1] + 1})")
            prior[key] = reader.fraction(fields[2])
        elif tokens[0] == "pay":
            fields = reader.expect(tokens, "pay", 6)
            key = (
                reader.integer(fields[0], 1, nx) - 1,
                reader.integer(fields[1], 1, ny) - 1,
                reader.integer(fields[2], 0, na - 1),
                reader.integer(fields[3], 0, nb - 1),
            )
            if key in pay:
                raise reader.error(f"duplicate payoff for {fields[:4]}")
            pay[key] = (reader.fraction(fields[4]), reader.fraction(fields[5]))
        else:
            raise reader.error(f"unknown keyword '{tokens[0]}' in a game file")

    if len(prior) != nx * ny:
        raise reader.error(f"prior covers {len(prior)} of {nx * ny} input pairs", header_line)
    if len(pay) != nx * ny * na * nb:
        raise reader.error(f"payoffs cover {len(pay)} of {nx * ny * na * nb} tuples", header_line)

    prior_table = np.empty((nx, ny), dtype=object)
    pay_a = np.empty((nx, ny, na, nb), dtype=object)
    pay_b = np.empty((nx, ny, na, nb), dtype=object)
    for key, value in prior.items():
        prior_table[key] = value
    for key, (value_a, value_b) in pay.items():
        pay_a[key] = value_a
        pay_b[key] = value_b
    try:
        return GameSpec(name=name, nx=nx, ny=ny, na=na, nb=nb, prior=prior_table, pay_a=pay_a, pay_b=pay_b)
    except ValidationError as error:
        raise reader.error(str(error), header_line) from error


def write_game(game: GameSpec) -> str:
    lines = [f"game {game.name} {game.nx} {game.ny} {game.na} {game.nb}"]
    for x, y in np.ndindex(game.nx, game.ny):
        lines.append(f"prior {x + 1} {y + 1} {_fraction_text(game.prior[x, y])}")
    for x, y, a, b in np.ndindex(*game.dims):
        lines.append(
            f"pay {x + 1} {y + 1} {a} {b} "
            f"{_fraction_text(game.pay_a[x, y, a, b])} {_fraction_text(game.pay_b[x, y, a, b])}",
        )
    return "\n".join(lines) + "\n"


def read_functional(text: str, path: str = "<string>") -> BellFunctional:
    reader = _Reader(path)
    lines = list(_lines(text))
    if not lines:
        raise reader.error("empty functional file")
    reader.line, tokens = lines[0]
    name, *fields = reader.expect(tokens, "bell", 6)
    dims = reader.dims(fields[:4])
    offset = reader.fraction(fields[4])
    header_line = reader.line

    coeff = np.empty(dims, dtype=object)
    coeff.fill(Fraction(0))
    seen = set()
    bound = None
    for reader.line, tokens in lines[1:]:
        if tokens[0] == "coef":
            fields = reader.expect(tokens, "coef", 5)
            key = (
                reader.integer(fields[0], 1, dims[0]) - 1,
                reader.integer(fields[1], 1, dims[1]) - 1,
                reader.integer(fields[2], 0, dims[2] - 1),
                reader.integer(fields[3], 0, dims[3] - 1),
            )
            if key in seen:
                raise reader.error(f"duplicate coefficient for {fields[:4]}")
            seen.add(key)
            coeff[key] = reader.fraction(fields[4])
        elif tokens[0] == "bound":
            if bound is not None:
                raise reader.error("duplicate 'bound' line")
            bound = reader.fraction(reader.expect(tokens, "bound", 1)[0])
        else:
            raise reader.error(f"unknown keyword '{tokens[0]}' in a functional file")
    try:
        return BellFunctional(name, coeff, bound, offset)
    except ValidationError as error:
        raise reader.error(str(error), header_line) from error


def write_functional(functional: BellFunctional) -> str:
    nx, ny, na, nb = functional.dims
    lines = [f"bell {functional.name} {nx} {ny} {na} {nb} {_fraction_text(functional.offset)}"]
    if functional.claimed_bound is not None:
        lines.append(f"bound {_fraction_text(functional.claimed_bound)}")
    for x, y, a, b in np.ndindex(*functional.dims):
        value = functional.coeff[x, y, a, b]
        if value:
            lines.append(f"coef {x + 1} {y + 1} {a} {b} {_fraction_text(value)}")
    return "\n".join(lines) + "\n"


def _read_measurements(reader: _Reader, rows: Dict[int, Dict[int, np.ndarray]], dim: int, who: str, line: int):
    if not rows:
        raise reader.error(f"no measurements for {who}", line)
    count = max(rows) + 1
    measurements = []
    for x in range(count):
        vectors = rows.get(x, {})
        if len(vectors) != dim:
            raise reader.error(f"{who}'s measurement {x + 1} has {len(vectors)} of {dim} basis vectors", line)
        basis = np.stack([vectors[k] for k in range(dim)], axis=1)
        try:
            measurements.append(ProjectiveMeasurement(basis))
        except ValidationError as error:
            raise reader.error(f"{who}'s measurement {x + 1}: {error}", line) from error
    return tuple(measurements)


def read_strategy(text: str, path: str = "<string>") -> QuantumStrategy:
    reader = _Reader(path)
    lines = list(_lines(text))
    if not lines:
        raise reader.error("empty strategy file")
    reader.line, tokens = lines[0]
    d_a, d_b = (reader.integer(token, low=1) for token in reader.expect(tokens, "dims", 2))
    header_line = reader.line

    amplitudes: List[complex] = []
    bases: Dict[str, Dict[int, Dict[int, np.ndarray]]] = {"ameas": {}, "bmeas": {}}
    for reader.line, tokens in lines[1:]:
        keyword = tokens[0]
        if keyword == "state":
            re, im = reader.expect(tokens, "state", 2)
            amplitudes.append(complex(reader.real(re), reader.real(im)))
        elif keyword in bases:
            dim = d_a if keyword == "ameas" else d_b
            fields = reader.expect(tokens, keyword, 2 + 2 * dim)
            x = reader.integer(fields[0], low=1) - 1
            k = reader.integer(fields[1], 0, dim - 1)
            vectors = bases[keyword].setdefault(x, {})
            if k in vectors:
                raise reader.error(f"duplicate basis vector {k} of {keyword} {x + 1}")
            values = [reader.real(token) for token in fields[2:]]
            # assign the parts separately, re + 1j*im would turn a -0.0 real part into 0.0
            vector = np.empty(dim, dtype=complex)
            vector.real = values[0::2]
            vector.imag = values[1::2]
            vectors[k] = vector
        else:
            raise reader.error(f"unknown keyword '{keyword}' in a strategy file")

    if len(amplitudes) != d_a * d_b:
        raise reader.error(f"expected {d_a * d_b} state lines, got {len(amplitudes)}", header_line)
    try:
        state = StateVector(d_a, d_b, np.array(amplitudes))
    except ValidationError as error:
        raise reader.error(str(error), header_line) from error
    return QuantumStrategy(
        state=state,
        alice_meas=_read_measurements(reader, bases["ameas"], d_a, "Alice", header_line),
        bob_meas=_read_measurements(reader, bases["bmeas"], d_b, "Bob", header_line),
    )


def write_strategy(strategy: QuantumStrategy) -> str:
    state = strategy.state
    lines = [f"dims {state.d_a} {state.d_b}"]
    for amplitude in state.amp:
        lines.append(f"state {_float_text(amplitude.real)} {_float_text(amplitude.imag)}")
    for keyword, measurements in (("ameas", strategy.alice_meas), ("bmeas", strategy.bob_meas)):
        for x, measurement in enumerate(measurements):
            for k in range(measurement.dim):
                components = " ".join(
                    f"{_float_text(c.real)} {_float_text(c.imag)}" for c in measurement.basis[:, k]
                )
                lines.append(f"{keyword} {x + 1} {k} {components}")
    return "\n".join(lines) + "\n"


def read_text_file(path: str) -> str:
    """
    The UTF-8 text of ``path``; unreadable or undecodable files raise ParseError.
    """
    try:
        with open(path, "rb") as file:
            data = file.read()
    except OSError as error:
        raise ParseError(f"cannot read file ({error.strerror})", path) from error
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as error:
        line = data.count(b"\n", 0, error.start) + 1
        raise ParseError(f"not valid UTF-8 text (byte {error.start})", path, line) from error


def load_game(path: str) -> GameSpec:
    return read_game(read_text_file(path), path)


def load_functional(path: str) -> BellFunctional:
    return read_functional(read_text_file(path), path)


def load_strategy(path: str) -> QuantumStrategy:
    return read_strategy(read_text_file(path), path)


def save_text(path: str, text: str) -> None:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as file:
        file.write(text)
    logger.info("wrote %s", path)
