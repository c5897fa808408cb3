from fractions import Fraction

import numpy as np
import pytest

from bellgames.catalog import (
    builtin_functional,
    builtin_functional_names,
    builtin_game,
    builtin_game_names,
    builtin_strategy,
    builtin_strategy_names,
)
from bellgames.errors import ParseError
from bellgames.fileformats import (
    load_game,
    load_strategy,
    read_functional,
    read_game,
    read_strategy,
    save_text,
    write_functional,
    write_game,
    write_strategy,
)
from bellgames.seesaw import SeesawConfig, seesaw

CHSH_TEXT = """\
# CHSH in probability form
bell chsh 2 2 2 2 0/1
bound 2/1
coef 1 1 0 0 1/1
coef 1 1 0 1 -1/1
coef 1 1 1 0 -1/1
coef 1 1 1 1 1/1
coef 1 2 0 0 1/1
coef 1 2 0 1 -1/1
coef 1 2 1 0 -1/1
coef 1 2 1 1 1/1
coef 2 1 0 0 1/1
coef 2 1 0 1 -1/1
coef 2 1 1 0 -1/1
coef 2 1 1 1 1/1
coef 2 2 0 0 -1/1
coef 2 2 0 1 1/1
coef 2 2 1 0 1/1
coef 2 2 1 1 -1/1
"""

TINY_GAME = """\
game tiny 1 1 2 2
prior 1 1 1/1
pay 1 1 0 0 1/1 0/1
pay 1 1 0 1 0/1 0/1
pay 1 1 1 0 0/1 0/1
pay 1 1 1 1 0/1 1/1
"""


@pytest.mark.parametrize("name", builtin_game_names())
def test_game_canonical_text_is_stable(name):
    game = builtin_game(name)
    text = write_game(game)
    parsed = read_game(text)
    assert write_game(parsed) == text
    assert (parsed.pay_a == game.pay_a).all()
    assert (parsed.pay_b == game.pay_b).all()
    assert (parsed.prior == game.prior).all()


@pytest.mark.parametrize("name", builtin_functional_names())
def test_functional_canonical_text_is_stable(name):
    functional = builtin_functional(name)
    text = write_functional(functional)
    parsed = read_functional(text)
    assert write_functional(parsed) == text
    assert parsed == functional
    assert parsed.claimed_bound == functional.claimed_bound


@pytest.mark.parametrize("name", builtin_strategy_names())
def test_strategy_canonical_text_is_stable(name):
    text = write_strategy(builtin_strategy(name))
    assert write_strategy(read_strategy(text)) == text


def test_chsh_file_matches_builtin():
    assert read_functional(CHSH_TEXT, "chsh.txt") == builtin_functional("chsh")
    assert write_functional(read_functional(CHSH_TEXT)) == write_functional(builtin_functional("chsh"))


def test_omitted_coefficients_are_zero():
    functional = read_functional("bell sparse 1 1 2 2 1/2\ncoef 1 1 1 1 3/4\n")
    assert functional.coeff[0, 0, 1, 1] == Fraction(3, 4)
    assert functional.coeff[0, 0, 0, 0] == 0
    assert functional.offset == Fraction(1, 2)
    assert functional.claimed_bound is None


def test_game_file_values():
    game = read_game(TINY_GAME)
    assert game.dims == (1, 1, 2, 2)
    assert game.pay_b[0, 0, 1, 1] == 1
    with_comments = "# a comment\n\n" + TINY_GAME.replace("pay 1 1 0 0", "pay 1 1 0 0   ") + "  # trailing\n"
    assert write_game(read_game(with_comments)) == write_game(game)


@pytest.mark.parametrize(
    "text, line, message",
    [
        ("", 0, "empty"),
        ("gaem tiny 1 1 2 2\n", 1, "expected a 'game' line"),
        (TINY_GAME.replace("pay 1 1 1 0 0/1 0/1", "pay 1 1 1 0 zero 0/1"), 5, "rational"),
        (TINY_GAME.replace("pay 1 1 1 0", "pay 1 1 0 0"), 5, "duplicate"),
        (TINY_GAME.replace("pay 1 1 1 0", "pay 1 1 2 0"), 5, "out of range"),
        (TINY_GAME + "bonus 1 1\n", 7, "unknown keyword"),
        (TINY_GAME.replace("pay 1 1 1 1 0/1 1/1\n", ""), 1, "cover 3 of 4"),
        (TINY_GAME.replace("prior 1 1 1/1", "prior 1 1 1/2"), 1, "prior sums to 1/2"),
        (TINY_GAME.replace("pay 1 1 0 1 0/1 0/1", "pay 1 1 0 1 0/1"), 4, "6 fields"),
    ],
)
def test_game_parse_errors(text, line, message):
    with pytest.raises(ParseError, match=message) as info:
        read_game(text, "tiny.txt")
    assert info.value.path == "tiny.txt"
    assert info.value.line == line
    assert str(info.value).startswith(f"tiny.txt:{line}: ")


def test_functional_parse_errors():
    with pytest.raises(ParseError, match="duplicate") as info:
        read_functional(CHSH_TEXT.replace("coef 1 2 0 0", "coef 1 1 0 0"), "chsh.txt")
    assert info.value.line == 8
    with pytest.raises(ParseError, match="duplicate 'bound'"):
        read_functional(CHSH_TEXT + "bound 3/1\n")
    with pytest.raises(ParseError, match="6 fields"):
        read_functional("bell short 2 2 2 2\n")
    with pytest.raises(ParseError, match="unknown keyword"):
        read_functional(CHSH_TEXT + "pay 1 1 0 0 1/1 1/1\n")


def test_strategy_parse_errors():
    text = write_strategy(builtin_strategy("chsh"))
    with pytest.raises(ParseError, match="normalized"):
        read_strategy(text.replace("state 0.0 0.0", "state 0.5 0.0", 1))
    with pytest.raises(ParseError, match="expected 4 state lines"):
        read_strategy("\n".join(line for line in text.splitlines() if not line.startswith("state 0.0")))
    with pytest.raises(ParseError, match="basis vectors"):
        read_strategy("\n".join(line for line in text.splitlines() if not line.startswith("bmeas 2 1")))
    with pytest.raises(ParseError, match="decimal") as info:
        read_strategy(text.replace("state 0.0 0.0", "state x 0.0", 1))
    assert info.value.line == 3

    lines = text.splitlines()
    first = next(i for i, line in enumerate(lines) if line.startswith("ameas 1 0"))
    second = next(i for i, line in enumerate(lines) if line.startswith("ameas 1 1"))
    lines[second] = "ameas 1 1" + lines[first][len("ameas 1 0"):]
    with pytest.raises(ParseError, match="orthogonal"):
        read_strategy("\n".join(lines))


def test_seesaw_strategy_survives_a_file(tmp_path):
    result = seesaw(builtin_functional("chsh"), SeesawConfig(dim=2, restarts=2, max_iters=30))
    path = tmp_path / "out" / "best.txt"
    save_text(str(path), write_strategy(result.best_strategy))
    loaded = load_strategy(str(path))
    np.testing.assert_array_equal(loaded.state.amp, result.best_strategy.state.amp)
    for ours, theirs in zip(loaded.alice_meas, result.best_strategy.alice_meas):
        np.testing.assert_array_equal(ours.basis, theirs.basis)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError, match="cannot read") as info:
        load_game(str(tmp_path / "absent.txt"))
    assert info.value.line == 0


def test_undecodable_file(tmp_path):
    path = tmp_path / "game.txt"
    path.write_bytes(b"# header\ngame broken 2 2 2 2\n\xff\n")
    with pytest.raises(ParseError, match="UTF-8") as info:
        load_game(str(path))
    assert info.value.line == 3
    assert info.value.path == str(path)


def test_strategy_keeps_negative_zero():
    text = write_strategy(builtin_strategy("chsh"))
    assert "ameas 1 1 -0.0 0.0 1.0 0.0" in text
    strategy = read_strategy(text)
    assert np.signbit(strategy.alice_meas[0].basis[0, 1].real)
    assert write_strategy(strategy) == text
