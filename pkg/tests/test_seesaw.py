from fractions import Fraction

import numpy as np
import pytest

from bellgames.bell import BellFunctional, evaluate, functional_from_game
from bellgames.catalog import (
    CHSH_ALICE_ANGLES,
    CHSH_BOB_ANGLES,
    builtin_functional,
    builtin_game,
    builtin_strategy,
)
from bellgames.equilibria import classical_optimum, find_pure_equilibria
from bellgames.errors import DimensionError, ValidationError
from bellgames.linalg import random_unitary
from bellgames.quantum import (
    ProjectiveMeasurement,
    QuantumStrategy,
    behavior_for_dims,
    embed_profile,
    max_entangled_state,
    qubit_plane_basis,
    random_state,
)
from bellgames.seesaw import (
    ALICE,
    BOB,
    SeesawConfig,
    best_response_gap,
    measurement_update,
    optimize_game,
    seesaw,
    state_update,
    strategy_value,
)

GAME1_VALUE = 3 * (1 + np.sqrt(2)) / 4
GAME2_VALUE = 2 * (2 + np.sqrt(3)) / 3
GAME3_VALUE = np.sqrt(3) / 2
CHSH_VALUE = 2 * np.sqrt(2)


def _random_strategy(rng, functional, dim):
    nx, ny, _, _ = functional.dims
    return QuantumStrategy(
        state=random_state(dim, dim, rng),
        alice_meas=tuple(ProjectiveMeasurement(random_unitary(dim, rng)) for _ in range(nx)),
        bob_meas=tuple(ProjectiveMeasurement(random_unitary(dim, rng)) for _ in range(ny)),
    )


def _random_functional(rng, dims):
    coeff = np.empty(dims, dtype=object)
    for index in np.ndindex(*dims):
        coeff[index] = Fraction(int(rng.integers(-6, 7)), 4)
    return BellFunctional("random", coeff)


def _with_measurement(strategy, player, index, measurement):
    if player == ALICE:
        meas = list(strategy.alice_meas)
        meas[index] = measurement
        return strategy.replace(alice_meas=tuple(meas))
    meas = list(strategy.bob_meas)
    meas[index] = measurement
    return strategy.replace(bob_meas=tuple(meas))


def test_config_validation():
    with pytest.raises(ValidationError):
        SeesawConfig(dim=1)
    with pytest.raises(ValidationError):
        SeesawConfig(dim=2, restarts=0)
    with pytest.raises(ValidationError):
        SeesawConfig(dim=2, tol=0)
    with pytest.raises(ValidationError):
        SeesawConfig(dim=2, seed=-1)
    with pytest.raises(ValidationError):
        SeesawConfig(dim=2, jobs=0)
    config = SeesawConfig(dim=2)
    assert (config.restarts, config.max_iters, config.tol) == (20, 500, 1e-10)


def test_dimension_below_outcomes():
    with pytest.raises(DimensionError):
        seesaw(builtin_functional("collins3"), SeesawConfig(dim=2, restarts=1))


def test_objective_equals_functional_value(rng):
    for dims, dim in (((2, 2, 2, 2), 2), ((2, 3, 3, 2), 3), ((3, 2, 2, 2), 3)):
        functional = _random_functional(rng, dims)
        strategy = _random_strategy(rng, functional, dim)
        expected = evaluate(functional, behavior_for_dims(functional.dims, strategy))
        assert strategy_value(functional, strategy) == pytest.approx(expected, abs=1e-12)


def test_measurement_update_never_decreases(rng):
    for case in range(100):
        dims = ((2, 2, 2, 2), (2, 2, 3, 3), (3, 2, 2, 3))[case % 3]
        dim = max(dims[2], dims[3]) + case % 2
        functional = _random_functional(rng, dims)
        strategy = _random_strategy(rng, functional, dim)
        player = ALICE if case % 2 else BOB
        index = case % (dims[0] if player == ALICE else dims[1])
        before = strategy_value(functional, strategy)
        updated = _with_measurement(strategy, player, index, measurement_update(functional, strategy, player, index))
        assert strategy_value(functional, updated) >= before - 1e-12


def test_measurement_update_fixed_point(rng):
    functional = _random_functional(rng, (2, 2, 2, 2))
    strategy = _random_strategy(rng, functional, 2)
    once = _with_measurement(strategy, ALICE, 1, measurement_update(functional, strategy, ALICE, 1))
    twice = _with_measurement(once, ALICE, 1, measurement_update(functional, once, ALICE, 1))
    assert strategy_value(functional, twice) == pytest.approx(strategy_value(functional, once), abs=1e-12)

    functional = _random_functional(rng, (2, 2, 3, 3))
    strategy = _random_strategy(rng, functional, 3)
    once = _with_measurement(strategy, BOB, 0, measurement_update(functional, strategy, BOB, 0))
    twice = _with_measurement(once, BOB, 0, measurement_update(functional, once, BOB, 0))
    assert strategy_value(functional, twice) >= strategy_value(functional, once) - 1e-12
    assert strategy_value(functional, twice) == pytest.approx(strategy_value(functional, once), abs=1e-6)

    chsh = builtin_functional("chsh")
    optimal = builtin_strategy("chsh")
    again = _with_measurement(optimal, BOB, 0, measurement_update(chsh, optimal, BOB, 0))
    assert strategy_value(chsh, again) == pytest.approx(CHSH_VALUE, abs=1e-12)


def test_binary_update_beats_planar_scan(rng):
    for _ in range(5):
        functional = _random_functional(rng, (2, 2, 2, 2))
        angles = rng.uniform(0, 2 * np.pi, size=4)
        strategy = QuantumStrategy(
            state=max_entangled_state(2),
            alice_meas=(qubit_plane_basis(angles[0]), qubit_plane_basis(angles[1])),
            bob_meas=(qubit_plane_basis(angles[2]), qubit_plane_basis(angles[3])),
        )
        best_scan = max(
            strategy_value(functional, _with_measurement(strategy, ALICE, 0, qubit_plane_basis(angle)))
            for angle in np.arange(0, 2 * np.pi, 0.005)
        )
        updated = _with_measurement(strategy, ALICE, 0, measurement_update(functional, strategy, ALICE, 0))
        assert strategy_value(functional, updated) >= best_scan - 1e-6


def test_measurement_update_recovers_detuned_chsh():
    chsh = builtin_functional("chsh")
    optimal = builtin_strategy("chsh")
    settings = [(ALICE, index, angle) for index, angle in enumerate(CHSH_ALICE_ANGLES)]
    settings += [(BOB, index, angle) for index, angle in enumerate(CHSH_BOB_ANGLES)]
    for player, index, angle in settings:
        detuned = _with_measurement(optimal, player, index, qubit_plane_basis(angle + 1.0))
        assert strategy_value(chsh, detuned) < CHSH_VALUE - 0.1
        best_scan = max(
            strategy_value(chsh, _with_measurement(detuned, player, index, qubit_plane_basis(scan)))
            for scan in np.arange(0, 2 * np.pi, 0.005)
        )
        updated = _with_measurement(detuned, player, index, measurement_update(chsh, detuned, player, index))
        assert strategy_value(chsh, updated) >= best_scan - 1e-6
        assert strategy_value(chsh, updated) == pytest.approx(CHSH_VALUE, abs=1e-9)


def test_binary_update_is_optimal_over_random_bases_in_dim3(rng):
    functional = _random_functional(rng, (2, 2, 2, 2))
    strategy = _random_strategy(rng, functional, 3)
    for player in (ALICE, BOB):
        best_random = max(
            strategy_value(functional, _with_measurement(strategy, player, 1, ProjectiveMeasurement(random_unitary(3, rng))))
            for _ in range(200)
        )
        updated = _with_measurement(strategy, player, 1, measurement_update(functional, strategy, player, 1))
        assert strategy_value(functional, updated) >= best_random - 1e-9


@pytest.mark.parametrize("name, dim, reference", [("game3", 2, GAME3_VALUE), ("game2", 3, None)])
def test_short_runs_on_builtin_games(name, dim, reference):
    functional = functional_from_game(builtin_game(name))
    result = seesaw(functional, SeesawConfig(dim=dim, restarts=2, max_iters=40))
    assert all(b >= a - 1e-12 for a, b in zip(result.trace, result.trace[1:]))
    assert result.best_value == pytest.approx(strategy_value(functional, result.best_strategy), abs=1e-9)
    if reference is not None:
        assert result.best_value <= reference + 1e-6


def test_state_update(rng):
    chsh = builtin_functional("chsh")
    optimal = builtin_strategy("chsh")
    scrambled = optimal.replace(state=random_state(2, 2, rng))
    state = state_update(chsh, scrambled)
    assert strategy_value(chsh, scrambled.replace(state=state)) == pytest.approx(CHSH_VALUE, abs=1e-9)
    assert abs(np.vdot(max_entangled_state(2).amp, state.amp)) == pytest.approx(1.0, abs=1e-9)

    for case in range(100):
        functional = _random_functional(rng, (2, 2, 2, 2) if case % 2 else (2, 2, 3, 3))
        strategy = _random_strategy(rng, functional, 3)
        updated = strategy.replace(state=state_update(functional, strategy))
        assert strategy_value(functional, updated) >= strategy_value(functional, strategy) - 1e-12


def test_state_update_with_zero_functional(rng):
    zero = BellFunctional("zero", np.zeros((2, 2, 2, 2), dtype=int))
    strategy = _random_strategy(rng, zero, 2)
    state = state_update(zero, strategy)
    assert np.linalg.norm(state.amp) == pytest.approx(1.0)
    assert strategy_value(zero, strategy.replace(state=state)) == 0


def test_trace_is_monotone_and_reproducible():
    config = SeesawConfig(dim=2, restarts=3, max_iters=40, seed=11)
    first = seesaw(builtin_functional("chsh"), config)
    assert all(b >= a - 1e-12 for a, b in zip(first.trace, first.trace[1:]))
    assert first.best_value == max(first.restart_values)
    assert first.best_value <= CHSH_VALUE + 1e-9

    second = seesaw(builtin_functional("chsh"), config)
    assert second.trace == first.trace
    assert second.restart_values == first.restart_values
    np.testing.assert_array_equal(second.best_strategy.state.amp, first.best_strategy.state.amp)


def test_classical_floor_is_embeddable(game1):
    bound, maximizers = classical_optimum(game1)
    functional = functional_from_game(game1)
    assert strategy_value(functional, embed_profile(game1, maximizers[0])) == pytest.approx(float(bound))


def test_best_response_gap_at_embedded_equilibria(game1):
    for profile, _ in find_pure_equilibria(game1):
        strategy = embed_profile(game1, profile)
        for player in (ALICE, BOB):
            assert abs(best_response_gap(game1, strategy, player)) <= 1e-6


def test_best_response_gap_is_never_negative(game1, game2, rng):
    assert best_response_gap(game1, builtin_strategy("game1"), ALICE) >= -1e-9
    assert best_response_gap(game1, builtin_strategy("game1"), BOB) >= -1e-9
    strategy = _random_strategy(rng, functional_from_game(game2), 3)
    assert best_response_gap(game2, strategy, ALICE, restarts=2) >= -1e-9
    with pytest.raises(ValidationError):
        best_response_gap(game1, builtin_strategy("game1"), "carol")


@pytest.mark.slow
def test_game1_optimum():
    result = optimize_game(builtin_game("game1"), SeesawConfig(dim=2))
    assert GAME1_VALUE - 1e-4 <= result.best_value <= GAME1_VALUE + 1e-6


@pytest.mark.slow
def test_game3_optimum():
    result = optimize_game(builtin_game("game3"), SeesawConfig(dim=2))
    assert GAME3_VALUE - 1e-4 <= result.best_value <= GAME3_VALUE + 1e-6


@pytest.mark.slow
def test_chsh_optimum():
    result = seesaw(builtin_functional("chsh"), SeesawConfig(dim=2))
    assert result.best_value == pytest.approx(CHSH_VALUE, abs=1e-4)


@pytest.mark.slow
def test_game2_reaches_closed_form_value():
    game = builtin_game("game2")
    result = optimize_game(game, SeesawConfig(dim=3))
    assert result.best_value >= GAME2_VALUE - 1e-4
    assert result.best_value >= float(classical_optimum(game)[0]) - 1e-9


@pytest.mark.slow
def test_parallel_restarts_match_serial():
    functional = functional_from_game(builtin_game("game3"))
    serial = seesaw(functional, SeesawConfig(dim=2, restarts=4, max_iters=60, jobs=1))
    parallel = seesaw(functional, SeesawConfig(dim=2, restarts=4, max_iters=60, jobs=2))
    assert parallel.restart_values == serial.restart_values
    assert parallel.trace == serial.trace
    assert parallel.best_restart == serial.best_restart
