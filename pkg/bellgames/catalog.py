"""
The builtin games, Bell functionals and quantum strategies.

Payoff tables are written block by block: ``blocks[x][y][a][b] = (payoff of Alice, payoff of Bob)``,
inputs and outputs 0-based (input 0 is A_1 / B_1).
"""
from __future__ import annotations

import logging
from fractions import Fraction
from typing import Callable, Dict, List

import numpy as np

from .bell import BellFunctional
from .errors import NotFoundError
from .game import GameSpec
from .quantum import (
    QuantumStrategy,
    fourier_basis,
    max_entangled_state,
    qubit_plane_basis,
)

logger = logging.getLogger(__name__)

H = Fraction(3, 2)
N = -H


def _game_from_blocks(name: str, blocks) -> GameSpec:
    table = np.array(blocks, dtype=object)
    nx, ny, na, nb, _ = table.shape
    prior = np.full((nx, ny), Fraction(1, nx * ny), dtype=object)
    return GameSpec(
        name=name,
        nx=nx,
        ny=ny,
        na=na,
        nb=nb,
        prior=prior,
        pay_a=table[..., 0],
        pay_b=table[..., 1],
    )


def _game1() -> GameSpec:
    z = (0, 0)
    blocks = [
        [  # A_1
            [[(2, 1), z], [z, (1, 2)]],  # B_1
            [[z, (2, 1)], [(1, 2), z]],  # B_2
        ],
        [  # A_2
            [[z, (1, 2)], [(2, 1), z]],
            [[(N, N), z], [z, (N, N)]],
        ],
    ]
    return _game_from_blocks("game1", blocks)


def _game2() -> GameSpec:
    z = (0, 0)
    h = (H, H)
    favored = [[(2, 1), z, z], [z, h, z], [z, z, (1, 2)]]
    blocks = [
        [favored, favored],  # A_1
        [  # A_2
            [[z, h, z], [z, z, h], [h, z, z]],
            favored,
        ],
    ]
    return _game_from_blocks("game2", blocks)


def _game3() -> GameSpec:
    z = (0, 0)
    h = (H, H)
    n = (N, N)
    plus = [[(2, 1), z], [z, (1, 2)]]
    minus = [[n, n], [n, n]]
    flip = [[z, h], [h, z]]
    blocks = [
        [plus, minus, flip],  # A_1
        [plus, plus, minus],  # A_2
        [minus, plus, plus],  # A_3
    ]
    return _game_from_blocks("game3", blocks)


_GAMES: Dict[str, Callable[[], GameSpec]] = {
    "game1": _game1,
    "game2": _game2,
    "game3": _game3,
}


def builtin_game(name: str) -> GameSpec:
    try:
        factory = _GAMES[name]
    except KeyError:
        raise NotFoundError(f"no builtin game named {name!r} (known: {', '.join(sorted(_GAMES))})") from None
    logger.debug("building builtin game %r", name)
    return factory()


def builtin_game_names() -> List[str]:
    return sorted(_GAMES)


def _functional(name: str, dims, terms, bound, offset=0) -> BellFunctional:
    """
    :param terms: mapping (x, y, a, b) -> coefficient, 0-based; missing tuples are 0.
    """
    coeff = np.empty(dims, dtype=object)
    coeff.fill(Fraction(0))
    for index, value in terms.items():
        coeff[index] += Fraction(value)
    return BellFunctional(name, coeff, Fraction(bound), Fraction(offset))


def _cereceda1() -> BellFunctional:
    # P11_11 + P12_01 + P21_10 - P22_11 <= 1
    terms = {(0, 0, 1, 1): 1, (0, 1, 0, 1): 1, (1, 0, 1, 0): 1, (1, 1, 1, 1): -1}
    return _functional("cereceda1", (2, 2, 2, 2), terms, 1)


def _cereceda2() -> BellFunctional:
    # P11_00 + P12_10 + P21_01 - P22_00 <= 1
    terms = {(0, 0, 0, 0): 1, (0, 1, 1, 0): 1, (1, 0, 0, 1): 1, (1, 1, 0, 0): -1}
    return _functional("cereceda2", (2, 2, 2, 2), terms, 1)


def _collins3() -> BellFunctional:
    # P(a = b) on settings 11, 12, 22 and P(b = a + 1 mod 3) on setting 21
    terms = {}
    for a in range(3):
        for x, y in ((0, 0), (0, 1), (1, 1)):
            terms[(x, y, a, a)] = 1
        terms[(1, 0, a, (a + 1) % 3)] = 1
    return _functional("collins3", (2, 2, 3, 3), terms, 3)


def _chained3() -> BellFunctional:
    # <A1B1> + <A2B2> + <A3B3> + <A2B1> + <A3B2> - <A1B3>, with <AB> = 2 (P00 + P11) - 1
    signs = {(0, 0): 1, (1, 1): 1, (2, 2): 1, (1, 0): 1, (2, 1): 1, (0, 2): -1}
    terms = {}
    for (x, y), sign in signs.items():
        for a in range(2):
            terms[(x, y, a, a)] = 2 * sign
    return _functional("chained3", (3, 3, 2, 2), terms, 4, offset=-sum(signs.values()))


def _chsh() -> BellFunctional:
    # <A1B1> + <A1B2> + <A2B1> - <A2B2> in the P00 + P11 - P01 - P10 form
    terms = {}
    for x in range(2):
        for y in range(2):
            sign = -1 if (x, y) == (1, 1) else 1
            for a in range(2):
                for b in range(2):
                    terms[(x, y, a, b)] = sign if a == b else -sign
    return _functional("chsh", (2, 2, 2, 2), terms, 2)


_FUNCTIONALS: Dict[str, Callable[[], BellFunctional]] = {
    "cereceda1": _cereceda1,
    "cereceda2": _cereceda2,
    "collins3": _collins3,
    "chained3": _chained3,
    "chsh": _chsh,
}


def builtin_functional(name: str) -> BellFunctional:
    try:
        factory = _FUNCTIONALS[name]
    except KeyError:
        raise NotFoundError(
            f"no builtin functional named {name!r} (known: {', '.join(sorted(_FUNCTIONALS))})",
        ) from None
    logger.debug("building builtin functional %r", name)
    return factory()


def builtin_functional_names() -> List[str]:
    return sorted(_FUNCTIONALS)


# Bloch angles of the real-plane qubit bases, per input
GAME1_ALICE_ANGLES = (0.0, np.pi / 2)
GAME1_BOB_ANGLES = (-np.pi / 4, -3 * np.pi / 4)
# Fourier shifts; Bob measures in the conjugate basis
GAME2_ALICE_SHIFTS = (0.0, 0.5)
GAME2_BOB_SHIFTS = (-0.25, 0.25)
GAME3_ALICE_ANGLES = (0.0, np.pi / 3, 2 * np.pi / 3)
GAME3_BOB_ANGLES = (np.pi / 6, np.pi / 2, 5 * np.pi / 6)
CHSH_ALICE_ANGLES = (0.0, np.pi / 2)
CHSH_BOB_ANGLES = (np.pi / 4, -np.pi / 4)

# best known quantum values, for strategies of the dimension the builtin strategy uses
QUANTUM_VALUES: Dict[str, float] = {
    "game1": 3 * (1 + np.sqrt(2)) / 4,
    "game2": 2 * (2 + np.sqrt(3)) / 3,
    "game3": np.sqrt(3) / 2,
    "cereceda1": (1 + np.sqrt(2)) / 2,
    "cereceda2": (1 + np.sqrt(2)) / 2,
    "collins3": 8 * (2 + np.sqrt(3)) / 9,
    "chained3": 6 * np.cos(np.pi / 6),
    "chsh": 2 * np.sqrt(2),
}


def _strategy1() -> QuantumStrategy:
    return QuantumStrategy(
        state=max_entangled_state(2),
        alice_meas=tuple(qubit_plane_basis(angle) for angle in GAME1_ALICE_ANGLES),
        bob_meas=tuple(qubit_plane_basis(angle) for angle in GAME1_BOB_ANGLES),
    )


def _strategy2() -> QuantumStrategy:
    return QuantumStrategy(
        state=max_entangled_state(3),
        alice_meas=tuple(fourier_basis(3, shift) for shift in GAME2_ALICE_SHIFTS),
        bob_meas=tuple(fourier_basis(3, shift, conjugate=True) for shift in GAME2_BOB_SHIFTS),
    )


def _strategy3() -> QuantumStrategy:
    return QuantumStrategy(
        state=max_entangled_state(2),
        alice_meas=tuple(qubit_plane_basis(angle) for angle in GAME3_ALICE_ANGLES),
        bob_meas=tuple(qubit_plane_basis(angle) for angle in GAME3_BOB_ANGLES),
    )


def _strategy_chsh() -> QuantumStrategy:
    return QuantumStrategy(
        state=max_entangled_state(2),
        alice_meas=tuple(qubit_plane_basis(angle) for angle in CHSH_ALICE_ANGLES),
        bob_meas=tuple(qubit_plane_basis(angle) for angle in CHSH_BOB_ANGLES),
    )


_STRATEGIES: Dict[str, Callable[[], QuantumStrategy]] = {
    "game1": _strategy1,
    "game2": _strategy2,
    "game3": _strategy3,
    "chsh": _strategy_chsh,
}

# the builtin strategy each builtin functional is usually evaluated on
_FUNCTIONAL_STRATEGIES = {
    "cereceda1": "game1",
    "cereceda2": "game1",
    "collins3": "game2",
    "chained3": "game3",
    "chsh": "chsh",
}


def builtin_strategy(name: str) -> QuantumStrategy:
    try:
        factory = _STRATEGIES[name]
    except KeyError:
        raise NotFoundError(
            f"no builtin strategy named {name!r} (known: {', '.join(sorted(_STRATEGIES))})",
        ) from None
    logger.debug("building builtin strategy %r", name)
    return factory()


def builtin_strategy_names():
    return sorted(_STRATEGIES)


def strategy_for(name: str) -> QuantumStrategy:
    """
    The builtin strategy matching a builtin game or functional name.
    """
    return builtin_strategy(_FUNCTIONAL_STRATEGIES.get(name, name))
