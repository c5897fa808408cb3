"""
Enumeration of deterministic profiles, pure (weak) Nash equilibria and classical bounds.
Everything here is exact: payoffs are Fractions and comparisons use no tolerance.
"""
from __future__ import annotations

import dataclasses
import logging
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import CapacityError
from .game import (
    GameSpec,
    PayoffPair,
    PureProfile,
    iter_alice_maps,
    iter_bob_maps,
    iter_profiles,
    profile_payoffs,
)

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10**6

ALICE = "alice"
BOB = "bob"


def _check_capacity(count: int, cap: int, what: str) -> None:
    if count > cap:
        raise CapacityError(f"tried to enumerate {count} {what}, above the cap of {cap}")


def enumerate_profiles(
    game: GameSpec,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[Tuple[PureProfile, PayoffPair]]:
    """
    All pure profiles of the game, in lexicographic order of (alice map, bob map), with exact payoffs.
    """
    _check_capacity(game.profile_count, cap, f"profiles of game {game.name}")
    logger.debug("enumerating %d profiles of %s", game.profile_count, game.name)
    return [(profile, profile_payoffs(game, profile)) for profile in iter_profiles(game)]


class _PayoffTable:
    """
    Payoffs of every profile, indexed by (alice map, bob map), with the best reply values of each player.
    """

    def __init__(self, game: GameSpec, cap: int):
        self.game = game
        self.rows = enumerate_profiles(game, cap)
        self.payoffs: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], PayoffPair] = {
            (profile.alice, profile.bob): payoff for profile, payoff in self.rows
        }
        # best payoff Alice can get against each Bob map, and Bob against each Alice map
        self.best_a: Dict[Tuple[int, ...], Fraction] = {}
        self.best_b: Dict[Tuple[int, ...], Fraction] = {}
        for (alice, bob), payoff in self.payoffs.items():
            if bob not in self.best_a or payoff.pay_a > self.best_a[bob]:
                self.best_a[bob] = payoff.pay_a
            if alice not in self.best_b or payoff.pay_b > self.best_b[alice]:
                self.best_b[alice] = payoff.pay_b

    def is_equilibrium(self, profile: PureProfile) -> bool:
        payoff = self.payoffs[(profile.alice, profile.bob)]
        return payoff.pay_a >= self.best_a[profile.bob] and payoff.pay_b >= self.best_b[profile.alice]


def find_pure_equilibria(
    game: GameSpec,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[Tuple[PureProfile, PayoffPair]]:
    """
    Profiles where no player strictly gains by replacing their whole input -> output map (weak Nash).
    Ties are kept.
    """
    table = _PayoffTable(game, cap)
    equilibria = [(profile, payoff) for profile, payoff in table.rows if table.is_equilibrium(profile)]
    logger.debug("game %s has %d pure equilibria", game.name, len(equilibria))
    return equilibria


def equilibrium_flags(
    game: GameSpec,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> List[Tuple[PureProfile, PayoffPair, bool]]:
    """
    The enumeration rows, each flagged with its equilibrium status (one pass over the table).
    """
    table = _PayoffTable(game, cap)
    return [(profile, payoff, table.is_equilibrium(profile)) for profile, payoff in table.rows]


def deviations(game: GameSpec, profile: PureProfile, player: str) -> List[PureProfile]:
    """
    Every profile obtained by a unilateral change of ``player``'s whole map.
    """
    profile.check(game)
    if player == ALICE:
        return [PureProfile(alice, profile.bob) for alice in iter_alice_maps(game) if alice != profile.alice]
    if player == BOB:
        return [PureProfile(profile.alice, bob) for bob in iter_bob_maps(game) if bob != profile.bob]
    raise ValueError(f"unknown player {player!r}")


@dataclasses.dataclass(frozen=True)
class Deviation:
    player: str
    profile: PureProfile
    gain: Fraction


def improving_deviation(game: GameSpec, profile: PureProfile) -> Optional[Deviation]:
    """
    A strictly improving unilateral deviation from ``profile`` (the witness that it is not an
    equilibrium), or None when there is none.
    """
    current = profile_payoffs(game, profile)
    for player in (ALICE, BOB):
        for other in deviations(game, profile, player):
            payoff = profile_payoffs(game, other)
            gain = payoff.pay_a - current.pay_a if player == ALICE else payoff.pay_b - current.pay_b
            if gain > 0:
                return Deviation(player, other, gain)
    return None


def classical_optimum(
    game: GameSpec,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Tuple[Fraction, List[PureProfile]]:
    """
    The largest total payoff over pure profiles and all of its maximizers.
    Since the total payoff is linear in the behavior, this also bounds every advice distribution.
    """
    rows = enumerate_profiles(game, cap)
    best = max(payoff.total for _, payoff in rows)
    return best, [profile for profile, payoff in rows if payoff.total == best]


@dataclasses.dataclass(frozen=True)
class ConflictReport:
    is_conflicting: bool
    alice_preferred: FrozenSet[PureProfile]
    bob_preferred: FrozenSet[PureProfile]
    equilibria: Tuple[Tuple[PureProfile, PayoffPair], ...] = ()


def conflict_report(game: GameSpec, cap: int = DEFAULT_ENUMERATION_CAP) -> ConflictReport:
    """
    Compare the equilibria each player prefers. The game has conflicting interests when
    the two sets of preferred equilibria are disjoint.
    """
    equilibria = find_pure_equilibria(game, cap)
    if not equilibria:
        return ConflictReport(False, frozenset(), frozenset())
    best_a = max(payoff.pay_a for _, payoff in equilibria)
    best_b = max(payoff.pay_b for _, payoff in equilibria)
    alice_preferred = frozenset(profile for profile, payoff in equilibria if payoff.pay_a == best_a)
    bob_preferred = frozenset(profile for profile, payoff in equilibria if payoff.pay_b == best_b)
    return ConflictReport(
        is_conflicting=alice_preferred.isdisjoint(bob_preferred),
        alice_preferred=alice_preferred,
        bob_preferred=bob_preferred,
        equilibria=tuple(equilibria),
    )
