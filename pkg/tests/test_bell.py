import logging
from fractions import Fraction

import numpy as np
import pytest

from bellgames.bell import (
    BellFunctional,
    canonical_form,
    classical_bound_bruteforce,
    correlator,
    deterministic_value,
    evaluate,
    evaluate_exact,
    functional_from_game,
    is_equivalent,
    is_violated,
)
from bellgames.catalog import builtin_functional, builtin_functional_names, builtin_game, builtin_strategy
from bellgames.errors import CapacityError, DimensionError, IntegrityError, NotFoundError, ValidationError
from bellgames.game import (
    Behavior,
    behavior_from_advice,
    behavior_from_profile,
    expected_payoffs,
    iter_profiles,
    parse_profile,
    random_advice,
)
from bellgames.linalg import random_unitary
from bellgames.quantum import ProjectiveMeasurement, QuantumStrategy, behavior_from_quantum, random_state

F = Fraction


@pytest.mark.parametrize(
    "name, bound",
    [("cereceda1", 1), ("cereceda2", 1), ("collins3", 3), ("chained3", 4), ("chsh", 2)],
)
def test_classical_bounds(name, bound):
    assert classical_bound_bruteforce(builtin_functional(name)) == F(bound)


def test_every_builtin_has_its_bound_checked():
    for name in builtin_functional_names():
        functional = builtin_functional(name)
        assert functional.claimed_bound is not None
        assert classical_bound_bruteforce(functional) == functional.claimed_bound


def test_unknown_builtin():
    with pytest.raises(NotFoundError, match="no builtin functional"):
        builtin_functional("mermin")


def test_claimed_bound_mismatch():
    chsh = builtin_functional("chsh")
    wrong = BellFunctional("chsh-wrong", chsh.coeff, F(3))
    with pytest.raises(IntegrityError, match="differs"):
        classical_bound_bruteforce(wrong)


def test_bound_capacity():
    with pytest.raises(CapacityError):
        classical_bound_bruteforce(builtin_functional("collins3"), cap=10)


def test_cereceda_on_profile(game1):
    behavior = behavior_from_profile(game1, parse_profile(game1, "0011"))
    assert evaluate_exact(builtin_functional("cereceda1"), behavior) == 1
    assert not is_violated(builtin_functional("cereceda1"), behavior)


def test_cereceda_violation(game1):
    behavior = behavior_from_quantum(game1, builtin_strategy("game1"))
    cereceda1 = builtin_functional("cereceda1")
    assert evaluate(cereceda1, behavior) == pytest.approx(1.20710678, abs=1e-8)
    assert is_violated(cereceda1, behavior)


def test_chained_on_constant_profile(game3):
    behavior = behavior_from_profile(game3, parse_profile(game3, "000000"))
    assert evaluate_exact(builtin_functional("chained3"), behavior) == 4


def test_correlators(game1):
    behavior = behavior_from_quantum(game1, builtin_strategy("game1"))
    assert correlator(behavior, 0, 0) == pytest.approx(1 / np.sqrt(2), abs=1e-12)
    assert correlator(behavior, 1, 1) == pytest.approx(-1 / np.sqrt(2), abs=1e-12)
    with pytest.raises(DimensionError):
        correlator(Behavior.uniform((2, 2, 3, 3)), 0, 0)
    with pytest.raises(DimensionError):
        correlator(behavior, 2, 0)


def test_game1_is_three_quarters_of_cereceda_sum(game1):
    cereceda = builtin_functional("cereceda1") + builtin_functional("cereceda2")
    assert functional_from_game(game1) == cereceda.scaled(F(3, 4))


def test_game2_is_three_quarters_of_collins(game2):
    assert functional_from_game(game2) == builtin_functional("collins3").scaled(F(3, 4))


def test_game3_is_a_sixth_of_chained(game3):
    chained = builtin_functional("chained3")
    assert is_equivalent(functional_from_game(game3), chained.scaled(F(1, 6)))
    assert functional_from_game(game3) != chained.scaled(F(1, 6))


def test_game3_correlator_identity(game3, rng):
    total = functional_from_game(game3)
    chained = builtin_functional("chained3")
    for profile in iter_profiles(game3):
        behavior = behavior_from_profile(game3, profile)
        assert expected_payoffs(game3, behavior).total == evaluate_exact(chained, behavior) / 6
    for _ in range(100):
        strategy = QuantumStrategy(
            state=random_state(2, 2, rng),
            alice_meas=tuple(ProjectiveMeasurement(random_unitary(2, rng)) for _ in range(3)),
            bob_meas=tuple(ProjectiveMeasurement(random_unitary(2, rng)) for _ in range(3)),
        )
        behavior = behavior_from_quantum(game3, strategy)
        assert evaluate(total, behavior) == pytest.approx(evaluate(chained, behavior) / 6, abs=1e-12)


@pytest.mark.parametrize("name", ["game1", "game2", "game3"])
def test_payoff_functional_bridge(name, rng):
    game = builtin_game(name)
    alice_only = functional_from_game(game, 1, 0)
    bob_only = functional_from_game(game, 0, 1)
    for _ in range(100):
        behavior = behavior_from_advice(game, random_advice(game, rng))
        pay = expected_payoffs(game, behavior)
        assert evaluate_exact(alice_only, behavior) == pay.pay_a
        assert evaluate_exact(bob_only, behavior) == pay.pay_b
        assert evaluate(functional_from_game(game), behavior) == pytest.approx(float(pay.total), abs=1e-12)


def test_deterministic_value_matches_profile_behavior(game1):
    cereceda2 = builtin_functional("cereceda2")
    for profile in iter_profiles(game1):
        behavior = behavior_from_profile(game1, profile)
        assert deterministic_value(cereceda2, profile.alice, profile.bob) == evaluate_exact(cereceda2, behavior)


def test_canonical_form():
    chsh = builtin_functional("chsh")
    canonical = canonical_form(chsh)
    assert canonical == canonical_form(canonical)
    assert canonical.offset == 0
    for x in range(2):
        for y in range(2):
            assert sum(canonical.coeff[x, y].flat) == 0
    shifted = BellFunctional("shifted", chsh.coeff + 1, None, F(-4))
    assert is_equivalent(chsh, shifted)


def test_functional_arithmetic_and_validation():
    chsh = builtin_functional("chsh")
    with pytest.raises(DimensionError):
        chsh + builtin_functional("collins3")
    with pytest.raises(DimensionError):
        BellFunctional("flat", np.zeros((2, 2), dtype=int))
    with pytest.raises(ValidationError):
        BellFunctional("float", np.full((1, 1, 2, 2), 0.5))
    assert chsh.scaled(-1).claimed_bound is None
    assert chsh.scaled(2).claimed_bound == 4
    with pytest.raises(DimensionError):
        evaluate(chsh, Behavior.uniform((2, 2, 3, 3)))
    with pytest.raises(ValidationError, match="exact"):
        evaluate_exact(chsh, Behavior(np.full((2, 2, 2, 2), 0.25)))


def test_bound_enumeration_is_logged(caplog):
    caplog.set_level(logging.DEBUG, logger="bellgames")
    assert classical_bound_bruteforce(builtin_functional("chsh")) == 2
    messages = [record.getMessage() for record in caplog.records]
    assert "building builtin functional 'chsh'" in messages
    assert "enumerating 16 deterministic strategies of chsh" in messages
    assert "functional chsh: classical bound 2 (claimed 2)" in messages
