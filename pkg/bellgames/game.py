"""
Exact representation of two-player Bayesian games.

All classical quantities (priors, payoffs, profile and advice behaviors) are kept as
:py:class:`fractions.Fraction` tensors so that equilibrium flags never depend on a float
tolerance. Reals only appear once a behavior comes from the quantum simulator.
"""
from __future__ import annotations

import dataclasses
import itertools
from fractions import Fraction
from typing import Dict, Iterator, Mapping, Optional, Tuple, Union

import numpy as np

from .errors import DimensionError, ValidationError
from .utils.rational import (
    exact_sum,
    fraction_array,
    parse_fraction,
    to_float_array,
    zeros_fraction_array,
)

# construction tolerance of behavior entries and per-setting normalization
BEHAVIOR_EPS = 1e-12

Number = Union[Fraction, float]


@dataclasses.dataclass(frozen=True, eq=False)
class GameSpec:
    """
    A two-player Bayesian game.
    Inputs are indexed 0..nx-1 / 0..ny-1 internally (A_1 is input 0), outputs 0..na-1 / 0..nb-1.

    :param prior: (nx, ny) table of input probabilities, summing exactly to 1.
    :param pay_a: (nx, ny, na, nb) payoff tensor of Alice.
    :param pay_b: (nx, ny, na, nb) payoff tensor of Bob.
    """

    name: str
    nx: int
    ny: int
    na: int
    nb: int
    prior: np.ndarray
    pay_a: np.ndarray
    pay_b: np.ndarray

    def __post_init__(self):
        for field_name in ("nx", "ny", "na", "nb"):
            value = getattr(self, field_name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ValidationError(f"game {self.name}: {field_name} must be a positive integer (got {value})")
        # frozen dataclass - go through object.__setattr__ to normalize the tensors
        object.__setattr__(self, "prior", fraction_array(self.prior, (self.nx, self.ny)))
        object.__setattr__(self, "pay_a", fraction_array(self.pay_a, self.dims))
        object.__setattr__(self, "pay_b", fraction_array(self.pay_b, self.dims))

        if any(p < 0 for p in self.prior.flat):
            raise ValidationError(f"game {self.name}: prior has negative entries")
        total = exact_sum(self.prior)
        if total != 1:
            raise ValidationError(f"game {self.name}: prior sums to {total}, not 1")

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return self.nx, self.ny, self.na, self.nb

    @property
    def profile_count(self) -> int:
        return self.na**self.nx * self.nb**self.ny

    def swapped(self) -> GameSpec:
        """
        The same game with the roles of Alice and Bob exchanged.
        """
        return GameSpec(
            name=f"{self.name}-swapped",
            nx=self.ny,
            ny=self.nx,
            na=self.nb,
            nb=self.na,
            prior=self.prior.T,
            pay_a=self.pay_b.transpose(1, 0, 3, 2),
            pay_b=self.pay_a.transpose(1, 0, 3, 2),
        )


@dataclasses.dataclass(frozen=True, order=True)
class PureProfile:
    """
    A deterministic strategy pair: ``alice[x]`` is Alice's output on input x, ``bob[y]`` Bob's on input y.
    Ordering is lexicographic on (alice, bob), the enumeration order.
    """

    alice: Tuple[int, ...]
    bob: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "alice", tuple(int(a) for a in self.alice))
        object.__setattr__(self, "bob", tuple(int(b) for b in self.bob))

    def check(self, game: GameSpec) -> None:
        self.check_dims(game.dims, f"game {game.name}")

    def check_dims(self, dims: Tuple[int, int, int, int], owner: str = "these dimensions") -> None:
        nx, ny, na, nb = dims
        if len(self.alice) != nx or len(self.bob) != ny:
            raise DimensionError(
                f"profile {self} has {len(self.alice)}+{len(self.bob)} entries, {owner} needs {nx}+{ny}",
            )
        if any(not 0 <= a < na for a in self.alice) or any(not 0 <= b < nb for b in self.bob):
            raise DimensionError(f"profile {self} has outputs out of range for {owner}")

    def __str__(self) -> str:
        outputs = self.alice + self.bob
        if all(o < 10 for o in outputs):
            return "".join(str(o) for o in outputs)
        return ",".join(str(o) for o in outputs)


def profile_string(game: GameSpec, profile: PureProfile) -> str:
    profile.check(game)
    return str(profile)


def parse_profile(game: GameSpec, text: str) -> PureProfile:
    """
    Parse the a_1..a_nx b_1..b_ny notation (``"0100"``), or its comma separated form.
    """
    return parse_profile_dims(game.dims, text, f"game {game.name}")


def parse_profile_dims(dims: Tuple[int, int, int, int], text: str, owner: str = "these dimensions") -> PureProfile:
    nx, ny = dims[0], dims[1]
    text = text.strip()
    parts = text.split(",") if "," in text else list(text)
    if len(parts) != nx + ny:
        raise DimensionError(f"profile {text!r} must have {nx + ny} outputs for {owner}")
    try:
        outputs = [int(part) for part in parts]
    except ValueError as error:
        raise DimensionError(f"profile {text!r} contains a non-digit") from error
    profile = PureProfile(tuple(outputs[:nx]), tuple(outputs[nx:]))
    profile.check_dims(dims, owner)
    return profile


def iter_alice_maps(game: GameSpec) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(game.na), repeat=game.nx)


def iter_bob_maps(game: GameSpec) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(game.nb), repeat=game.ny)


def iter_profiles(game: GameSpec) -> Iterator[PureProfile]:
    for alice in iter_alice_maps(game):
        for bob in iter_bob_maps(game):
            yield PureProfile(alice, bob)


@dataclasses.dataclass(frozen=True, eq=False)
class AdviceDistribution:
    """
    Common advice: a probability distribution over pure profiles, sampled by an arbitrator
    before the inputs are handed out.
    """

    weights: Mapping[PureProfile, Fraction]

    def __post_init__(self):
        weights = {}
        for profile, weight in dict(self.weights).items():
            weight = parse_fraction(weight)
            if weight < 0:
                raise ValidationError(f"advice weight of {profile} is negative ({weight})")
            if weight:
                weights[profile] = weights.get(profile, Fraction(0)) + weight
        total = sum(weights.values(), Fraction(0))
        if total != 1:
            raise ValidationError(f"advice weights sum to {total}, not 1")
        object.__setattr__(self, "weights", dict(sorted(weights.items())))

    @classmethod
    def point(cls, profile: PureProfile) -> AdviceDistribution:
        return cls({profile: Fraction(1)})

    def items(self):
        return self.weights.items()


def random_advice(game: GameSpec, rng: np.random.Generator, support: int = 4) -> AdviceDistribution:
    """
    A random rational advice distribution on up to ``support`` random profiles.
    """
    weights: Dict[PureProfile, Fraction] = {}
    raw = [int(w) for w in rng.integers(1, 20, size=support)]
    total = sum(raw)
    for weight in raw:
        alice = tuple(int(a) for a in rng.integers(0, game.na, size=game.nx))
        bob = tuple(int(b) for b in rng.integers(0, game.nb, size=game.ny))
        profile = PureProfile(alice, bob)
        weights[profile] = weights.get(profile, Fraction(0)) + Fraction(weight, total)
    return AdviceDistribution(weights)


@dataclasses.dataclass(frozen=True, eq=False)
class Behavior:
    """
    A conditional probability table P(a,b|x,y), stored as a (nx, ny, na, nb) float tensor.
    Behaviors built from profiles or advice also keep the exact rational table in ``exact``.
    """

    probs: np.ndarray
    exact: Optional[np.ndarray] = None

    def __post_init__(self):
        probs = np.array(self.probs, dtype=float)
        if probs.ndim != 4:
            raise DimensionError(f"behavior must be a 4-index tensor (got shape {probs.shape})")
        if not np.all(np.isfinite(probs)):
            raise ValidationError("behavior has non-finite entries")
        if probs.min(initial=0.0) < -BEHAVIOR_EPS or probs.max(initial=0.0) > 1 + BEHAVIOR_EPS:
            raise ValidationError(
                f"behavior entries must lie in [0, 1] (got range [{probs.min()}, {probs.max()}])",
            )
        probs = np.clip(probs, 0.0, 1.0)
        sums = probs.sum(axis=(2, 3))
        worst = np.abs(sums - 1.0).max(initial=0.0)
        if worst > BEHAVIOR_EPS:
            raise ValidationError(f"behavior is not normalized (off by {worst:.3e})")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)
        if self.exact is not None:
            object.__setattr__(self, "exact", fraction_array(self.exact, probs.shape))

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return tuple(self.probs.shape)

    @classmethod
    def uniform(cls, dims: Tuple[int, int, int, int]) -> Behavior:
        nx, ny, na, nb = dims
        exact = zeros_fraction_array(dims)
        exact.fill(Fraction(1, na * nb))
        return cls(to_float_array(exact), exact=exact)

    @classmethod
    def from_exact(cls, exact: np.ndarray) -> Behavior:
        return cls(to_float_array(exact), exact=exact)

    def alice_marginals(self) -> np.ndarray:
        """(nx, ny, na) table of P(a|x,y)."""
        return self.probs.sum(axis=3)

    def bob_marginals(self) -> np.ndarray:
        """(nx, ny, nb) table of P(b|x,y)."""
        return self.probs.sum(axis=2)

    def signaling_gap(self) -> float:
        """
        Largest dependence of one player's marginal on the other player's input.
        Zero for every classical or quantum behavior.
        """
        alice = self.alice_marginals()
        bob = self.bob_marginals()
        gap_a = np.abs(alice - alice[:, :1, :]).max(initial=0.0)
        gap_b = np.abs(bob - bob[:1, :, :]).max(initial=0.0)
        return float(max(gap_a, gap_b))


@dataclasses.dataclass(frozen=True)
class PayoffPair:
    pay_a: Number
    pay_b: Number

    @property
    def total(self) -> Number:
        return self.pay_a + self.pay_b

    @property
    def is_exact(self) -> bool:
        return isinstance(self.pay_a, Fraction) and isinstance(self.pay_b, Fraction)

    @property
    def fairness_gap(self) -> Number:
        return abs(self.pay_a - self.pay_b)


def _check_dims(game: GameSpec, dims: Tuple[int, ...]) -> None:
    if tuple(dims) != game.dims:
        raise DimensionError(f"dimensions {tuple(dims)} do not match game {game.name} {game.dims}")


def _profile_exact(dims: Tuple[int, int, int, int], profile: PureProfile) -> np.ndarray:
    exact = zeros_fraction_array(dims)
    for x, a in enumerate(profile.alice):
        for y, b in enumerate(profile.bob):
            exact[x, y, a, b] = Fraction(1)
    return exact


def behavior_from_profile(game: GameSpec, profile: PureProfile) -> Behavior:
    profile.check(game)
    return Behavior.from_exact(_profile_exact(game.dims, profile))


def deterministic_behavior(dims: Tuple[int, int, int, int], profile: PureProfile) -> Behavior:
    """
    The deterministic behavior of a profile for any dimensions, no game needed.
    """
    profile.check_dims(dims)
    return Behavior.from_exact(_profile_exact(tuple(dims), profile))


def behavior_from_advice(game: GameSpec, advice: AdviceDistribution) -> Behavior:
    """
    The convex combination of the deterministic behaviors of the advice's profiles,
    P(a,b|x,y) = sum over profiles p with p.alice[x]=a, p.bob[y]=b of Pr(p).
    """
    exact = zeros_fraction_array(game.dims)
    for profile, weight in advice.items():
        profile.check(game)
        for x, a in enumerate(profile.alice):
            for y, b in enumerate(profile.bob):
                exact[x, y, a, b] += weight
    return Behavior.from_exact(exact)


def profile_payoffs(game: GameSpec, profile: PureProfile) -> PayoffPair:
    """
    Expected payoffs of a pure profile by direct block lookup.
    """
    profile.check(game)
    pay_a = Fraction(0)
    pay_b = Fraction(0)
    for x, a in enumerate(profile.alice):
        for y, b in enumerate(profile.bob):
            weight = game.prior[x, y]
            if weight:
                pay_a += weight * game.pay_a[x, y, a, b]
                pay_b += weight * game.pay_b[x, y, a, b]
    return PayoffPair(pay_a, pay_b)


def expected_payoffs(game: GameSpec, behavior: Behavior) -> PayoffPair:
    """
    $_A = sum prior(x,y) payA(x,y,a,b) P(a,b|x,y), likewise for Bob.
    Exact when the behavior carries its rational table.
    """
    _check_dims(game, behavior.dims)
    prior = game.prior[:, :, None, None]
    if behavior.exact is not None:
        return PayoffPair(
            exact_sum(prior * game.pay_a * behavior.exact),
            exact_sum(prior * game.pay_b * behavior.exact),
        )
    weights = to_float_array(prior) * behavior.probs
    return PayoffPair(
        float(np.sum(weights * to_float_array(game.pay_a))),
        float(np.sum(weights * to_float_array(game.pay_b))),
    )


def common_interest_game(name: str, prior, payoff) -> GameSpec:
    """
    A game in which both players receive the same payoff tensor.
    """
    payoff = np.asarray(payoff, dtype=object)
    nx, ny, na, nb = payoff.shape
    return GameSpec(name=name, nx=nx, ny=ny, na=na, nb=nb, prior=prior, pay_a=payoff, pay_b=payoff)
