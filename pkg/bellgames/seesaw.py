"""
See-saw maximization of Bell functionals over quantum strategies.

One iteration updates every measurement of Alice, then every measurement of Bob, then replaces the
state by the principal eigenvector of the game operator G = sum c(x,y,a,b) Pi^x_a (x) Pi^y_b.
Every step only accepts non-decreasing objective values, so the trace of a restart is monotone.
"""
from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import List, Tuple

import numpy as np

from .bell import BellFunctional, functional_from_game
from .errors import DimensionError, IntegrityError, ValidationError
from .game import GameSpec
from .linalg import hermitian_eigh, hermitian_principal_eigenvector, random_unitary
from .quantum import (
    ProjectiveMeasurement,
    QuantumStrategy,
    StateVector,
    check_outcomes,
    max_entangled_state,
    outcome_of,
    random_state,
)

logger = logging.getLogger(__name__)

DEFAULT_SEED = 20150101
ALICE = "alice"
BOB = "bob"

# sweeps of pairwise rotations per measurement update, and the gain below which a sweep stops
_MAX_SWEEPS = 50
_SWEEP_TOL = 1e-14


@dataclasses.dataclass(frozen=True)
class SeesawConfig:
    """
    :param dim: local dimension of both players.
    :param restarts: number of independent starts; even ones begin on the maximally entangled state.
    :param max_iters: iteration cap per restart.
    :param tol: a restart stops once one iteration improves the objective by less than this.
    :param seed: 64-bit seed; restart r draws from the stream seeded by (seed, r).
    :param jobs: worker processes for the restarts.
    """

    dim: int
    restarts: int = 20
    max_iters: int = 500
    tol: float = 1e-10
    seed: int = DEFAULT_SEED
    jobs: int = 1

    def __post_init__(self):
        if self.dim < 2:
            raise ValidationError(f"see-saw dimension must be >= 2 (got {self.dim})")
        if self.restarts < 1:
            raise ValidationError(f"see-saw needs at least one restart (got {self.restarts})")
        if self.max_iters < 1:
            raise ValidationError(f"max_iters must be positive (got {self.max_iters})")
        if not self.tol > 0:
            raise ValidationError(f"tol must be positive (got {self.tol})")
        if not 0 <= self.seed < 2**64:
            raise ValidationError(f"seed must be an unsigned 64-bit integer (got {self.seed})")
        if self.jobs < 1:
            raise ValidationError(f"jobs must be positive (got {self.jobs})")


@dataclasses.dataclass(frozen=True, eq=False)
class SeesawResult:
    best_value: float
    best_strategy: QuantumStrategy
    trace: Tuple[float, ...]
    converged: bool
    restart_values: Tuple[float, ...]
    best_restart: int


class _Problem:
    """
    A functional lifted to basis outcomes: coefficient c[x, y, k, l] belongs to basis vectors k, l,
    which report outputs outcome_of(k), outcome_of(l).
    """

    def __init__(self, functional: BellFunctional, d_a: int, d_b: int):
        nx, ny, na, nb = functional.dims
        check_outcomes(d_a, na)
        check_outcomes(d_b, nb)
        coeff = functional.float_coeff
        rows = [outcome_of(k, na) for k in range(d_a)]
        cols = [outcome_of(l, nb) for l in range(d_b)]
        self.coeff = coeff[:, :, rows][:, :, :, cols]
        self.offset = float(functional.offset)
        self.outcomes = {ALICE: na, BOB: nb}
        self.d_a, self.d_b = d_a, d_b

    def objective(self, phi: np.ndarray, alice: np.ndarray, bob: np.ndarray) -> float:
        amplitudes = np.einsum("xak,ab,ybl->xykl", alice.conj(), phi, bob.conj())
        value = float(np.sum(self.coeff * np.abs(amplitudes) ** 2)) + self.offset
        if not np.isfinite(value):
            raise IntegrityError("see-saw objective is not finite")
        return value

    def local_operators(self, player: str, index: int, phi: np.ndarray, alice, bob) -> np.ndarray:
        """
        Stack M[k] such that the terms of the objective involving ``player``'s measurement ``index``
        equal sum_k u_k^H M[k] u_k, for the basis vectors u_k of that measurement.
        """
        # coeff[y, k, l]: other player's input y, own basis index k, other player's basis index l
        if player == ALICE:
            coeff, other, matrix = self.coeff[index], bob, phi
        else:
            coeff, other, matrix = self.coeff[:, index].transpose(0, 2, 1), alice, phi.T
        # K[k] = sum_{y,l} c[y, k, l] conj(beta^y_l) beta^y_l^T
        k_ops = np.einsum("ykl,ybl,ycl->kbc", coeff, other.conj(), other)
        # M[k] = Phi K[k] Phi^H
        return np.einsum("ab,kbc,dc->kad", matrix, k_ops, matrix.conj())

    def game_operator(self, alice: np.ndarray, bob: np.ndarray) -> np.ndarray:
        pi_a = np.einsum("xak,xck->xkac", alice, alice.conj())
        pi_b = np.einsum("ybl,ydl->ylbd", bob, bob.conj())
        operator = np.einsum("xykl,xkac,ylbd->abcd", self.coeff, pi_a, pi_b)
        size = self.d_a * self.d_b
        operator = operator.reshape(size, size)
        return (operator + operator.conj().T) / 2


def _basis_value(operators: np.ndarray, basis: np.ndarray) -> float:
    return float(np.real(np.einsum("ak,kab,bk->", basis.conj(), operators, basis)))


def _closest_unitary(basis: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(basis)
    return w @ vh


def _improve_basis(operators: np.ndarray, basis: np.ndarray, outcomes: int) -> np.ndarray:
    """
    Raise sum_k u_k^H M[k] u_k over orthonormal bases.
    Two outputs: exact, vector 0 is the top eigenvector of M[0] - M[last]. Output 0 owns only basis
    vector 0 (see outcome_of), so its projector is rank 1 and the value is
    lambda_max(M[0] - M[last]) + tr(M[last]); for dim > 2 a higher rank output-0 projector is not
    representable.
    Otherwise: sweeps of optimal rotations inside span(u_i, u_j), kept only when they improve.
    """
    dim = basis.shape[0]
    if outcomes == 2:
        _, vectors = hermitian_eigh(operators[0] - operators[dim - 1])
        candidate = vectors[:, ::-1]
        return candidate if _basis_value(operators, candidate) >= _basis_value(operators, basis) else basis

    basis = basis.copy()
    groups = [outcome_of(k, outcomes) for k in range(dim)]
    for _ in range(_MAX_SWEEPS):
        gained = 0.0
        for i in range(dim - 1):
            for j in range(i + 1, dim):
                if groups[i] == groups[j]:
                    continue
                pair = basis[:, [i, j]]
                difference = pair.conj().T @ (operators[i] - operators[j]) @ pair
                current = float(np.real(difference[0, 0]))
                eigenvalues, vectors = hermitian_eigh(difference)
                if eigenvalues[-1] > current:
                    basis[:, [i, j]] = pair @ vectors[:, ::-1]
                    gained += eigenvalues[-1] - current
        if gained < _SWEEP_TOL:
            break
    return _closest_unitary(basis)


def _update_measurement(problem: _Problem, player: str, index: int, phi, alice, bob) -> np.ndarray:
    bases = alice if player == ALICE else bob
    operators = problem.local_operators(player, index, phi, alice, bob)
    candidate = _improve_basis(operators, bases[index], problem.outcomes[player])
    updated = bases.copy()
    updated[index] = candidate
    before = problem.objective(phi, alice, bob)
    if player == ALICE:
        after = problem.objective(phi, updated, bob)
    else:
        after = problem.objective(phi, alice, updated)
    return candidate if after >= before else bases[index]


def _update_state(problem: _Problem, phi, alice, bob) -> np.ndarray:
    _, vector = hermitian_principal_eigenvector(problem.game_operator(alice, bob))
    candidate = (vector / np.linalg.norm(vector)).reshape(problem.d_a, problem.d_b)
    if problem.objective(candidate, alice, bob) >= problem.objective(phi, alice, bob):
        return candidate
    return phi


def _arrays(strategy: QuantumStrategy):
    return strategy.state.matrix.copy(), strategy.alice_bases.copy(), strategy.bob_bases.copy()


def _strategy(phi: np.ndarray, alice: np.ndarray, bob: np.ndarray) -> QuantumStrategy:
    d_a, d_b = phi.shape
    return QuantumStrategy(
        state=StateVector.normalized(d_a, d_b, phi.reshape(-1)),
        alice_meas=tuple(ProjectiveMeasurement(_closest_unitary(basis)) for basis in alice),
        bob_meas=tuple(ProjectiveMeasurement(_closest_unitary(basis)) for basis in bob),
    )


def _check_strategy(functional: BellFunctional, strategy: QuantumStrategy) -> None:
    strategy.check(functional.dims)


def measurement_update(
    functional: BellFunctional,
    strategy: QuantumStrategy,
    player: str,
    index: int,
) -> ProjectiveMeasurement:
    """
    One see-saw half step: a new basis for ``player``'s measurement on input ``index`` (0-based)
    that does not lower the objective, everything else fixed.
    """
    _check_strategy(functional, strategy)
    if player not in (ALICE, BOB):
        raise ValidationError(f"unknown player {player!r}")
    problem = _Problem(functional, strategy.state.d_a, strategy.state.d_b)
    phi, alice, bob = _arrays(strategy)
    count = alice.shape[0] if player == ALICE else bob.shape[0]
    if not 0 <= index < count:
        raise DimensionError(f"{player} has no input {index}")
    basis = _update_measurement(problem, player, index, phi, alice, bob)
    return ProjectiveMeasurement(_closest_unitary(basis))


def state_update(functional: BellFunctional, strategy: QuantumStrategy) -> StateVector:
    """
    The principal eigenvector of the game operator for the fixed measurements.
    """
    _check_strategy(functional, strategy)
    problem = _Problem(functional, strategy.state.d_a, strategy.state.d_b)
    phi, alice, bob = _arrays(strategy)
    phi = _update_state(problem, phi, alice, bob)
    return StateVector.normalized(problem.d_a, problem.d_b, phi.reshape(-1))


@dataclasses.dataclass
class _RestartOutcome:
    restart: int
    value: float
    trace: List[float]
    converged: bool
    phi: np.ndarray
    alice: np.ndarray
    bob: np.ndarray


def _run_restart(functional: BellFunctional, config: SeesawConfig, restart: int) -> _RestartOutcome:
    nx, ny, _, _ = functional.dims
    dim = config.dim
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, restart]))
    problem = _Problem(functional, dim, dim)

    if restart % 2 == 0:
        phi = max_entangled_state(dim).matrix.copy()
    else:
        phi = random_state(dim, dim, rng).matrix.copy()
    alice = np.stack([random_unitary(dim, rng) for _ in range(nx)])
    bob = np.stack([random_unitary(dim, rng) for _ in range(ny)])

    value = problem.objective(phi, alice, bob)
    trace = [value]
    converged = False
    for iteration in range(config.max_iters):
        for x in range(nx):
            alice[x] = _update_measurement(problem, ALICE, x, phi, alice, bob)
        for y in range(ny):
            bob[y] = _update_measurement(problem, BOB, y, phi, alice, bob)
        phi = _update_state(problem, phi, alice, bob)
        new_value = problem.objective(phi, alice, bob)
        trace.append(new_value)
        improvement = new_value - value
        value = new_value
        if improvement < config.tol:
            converged = True
            break
    logger.debug(
        "restart %d of %s: %.10f after %d iterations (converged=%s)",
        restart,
        functional.name,
        value,
        len(trace) - 1,
        converged,
    )
    return _RestartOutcome(restart, value, trace, converged, phi, alice, bob)


def seesaw(functional: BellFunctional, config: SeesawConfig) -> SeesawResult:
    """
    Maximize ``functional`` over quantum strategies of local dimension ``config.dim``.
    Deterministic for a given (functional, config), independently of ``config.jobs``.
    """
    nx, ny, na, nb = functional.dims
    if max(na, nb) > config.dim:
        raise DimensionError(
            f"see-saw dimension {config.dim} is smaller than the outcome count {max(na, nb)} of {functional.name}",
        )
    restarts = range(config.restarts)
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as executor:
            outcomes = list(
                executor.map(_run_restart, [functional] * config.restarts, [config] * config.restarts, restarts),
            )
    else:
        outcomes = [_run_restart(functional, config, restart) for restart in restarts]

    # max by value, ties go to the lowest restart index
    best = max(outcomes, key=lambda outcome: (outcome.value, -outcome.restart))
    logger.info("see-saw on %s (dim %d): best %.10f from restart %d", functional.name, config.dim, best.value, best.restart)
    return SeesawResult(
        best_value=best.value,
        best_strategy=_strategy(best.phi, best.alice, best.bob),
        trace=tuple(best.trace),
        converged=best.converged,
        restart_values=tuple(outcome.value for outcome in outcomes),
        best_restart=best.restart,
    )


def optimize_game(game: GameSpec, config: SeesawConfig, w_a=1, w_b=1) -> SeesawResult:
    return seesaw(functional_from_game(game, w_a, w_b), config)


def best_response_gap(
    game: GameSpec,
    strategy: QuantumStrategy,
    player: str,
    restarts: int = 8,
    seed: int = DEFAULT_SEED,
) -> float:
    """
    How much ``player`` could gain by changing only their own measurements, state and the other
    player fixed. Each input is optimized separately (the player's payoff is a sum over their inputs),
    starting from the current basis and from ``restarts`` random bases.
    """
    if player not in (ALICE, BOB):
        raise ValidationError(f"unknown player {player!r}")
    functional = functional_from_game(game, 1, 0) if player == ALICE else functional_from_game(game, 0, 1)
    strategy.check(game.dims)
    problem = _Problem(functional, strategy.state.d_a, strategy.state.d_b)
    phi, alice, bob = _arrays(strategy)
    current = problem.objective(phi, alice, bob)
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0 if player == ALICE else 1]))
    bases = alice if player == ALICE else bob
    outcomes = problem.outcomes[player]
    dim = bases.shape[1]

    for index in range(bases.shape[0]):
        operators = problem.local_operators(player, index, phi, alice, bob)
        starts = [bases[index]] + [random_unitary(dim, rng) for _ in range(restarts)]
        best_basis, best_value = bases[index], _basis_value(operators, bases[index])
        for start in starts:
            basis = start
            value = _basis_value(operators, basis)
            for _ in range(_MAX_SWEEPS):
                basis = _improve_basis(operators, basis, outcomes)
                improved = _basis_value(operators, basis)
                if improved - value < _SWEEP_TOL:
                    value = max(value, improved)
                    break
                value = improved
            if value > best_value:
                best_basis, best_value = basis, value
        bases[index] = best_basis

    deviating = problem.objective(phi, alice, bob)
    gap = deviating - current
    logger.debug("best response gap of %s: %.3e", player, gap)
    return gap


def strategy_value(functional: BellFunctional, strategy: QuantumStrategy) -> float:
    """
    The see-saw objective of a strategy (equal to evaluating the functional on its behavior).
    """
    _check_strategy(functional, strategy)
    problem = _Problem(functional, strategy.state.d_a, strategy.state.d_b)
    return problem.objective(*_arrays(strategy))
