"""
Bell functionals: linear forms sum c(x,y,a,b) P(a,b|x,y) + offset over behaviors, with exact rational
coefficients. Expected payoffs and Bell expressions are both instances.
"""
from __future__ import annotations

import dataclasses
import itertools
import logging
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from .equilibria import DEFAULT_ENUMERATION_CAP
from .errors import CapacityError, DimensionError, IntegrityError, ValidationError
from .game import Behavior, GameSpec
from .utils.rational import exact_sum, fraction_array, parse_fraction, to_float_array

logger = logging.getLogger(__name__)

VIOLATION_TOL = 1e-9


@dataclasses.dataclass(frozen=True, eq=False)
class BellFunctional:
    """
    :param coeff: (nx, ny, na, nb) rational coefficient tensor.
    :param claimed_bound: the classical (local) bound the literature states, checked by
        :py:func:`classical_bound_bruteforce` when present.
    :param offset: constant added after the linear form.
    """

    name: str
    coeff: np.ndarray
    claimed_bound: Optional[Fraction] = None
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        coeff = np.asarray(self.coeff, dtype=object)
        if coeff.ndim != 4 or min(coeff.shape) < 1:
            raise DimensionError(f"functional {self.name}: coefficients must be a non-empty 4-index tensor")
        object.__setattr__(self, "coeff", fraction_array(coeff, coeff.shape))
        object.__setattr__(self, "offset", parse_fraction(self.offset))
        if self.claimed_bound is not None:
            object.__setattr__(self, "claimed_bound", parse_fraction(self.claimed_bound))

    @property
    def dims(self) -> Tuple[int, int, int, int]:
        return tuple(self.coeff.shape)

    @property
    def float_coeff(self) -> np.ndarray:
        return to_float_array(self.coeff)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BellFunctional):
            return NotImplemented
        return (
            self.dims == other.dims
            and self.offset == other.offset
            and all(a == b for a, b in zip(self.coeff.flat, other.coeff.flat))
        )

    __hash__ = None

    def scaled(self, factor, name: str = None) -> BellFunctional:
        factor = parse_fraction(factor)
        bound = None if self.claimed_bound is None or factor < 0 else self.claimed_bound * factor
        return BellFunctional(name or f"{factor}*{self.name}", self.coeff * factor, bound, self.offset * factor)

    def __add__(self, other: BellFunctional) -> BellFunctional:
        if self.dims != other.dims:
            raise DimensionError(f"cannot add functionals of dims {self.dims} and {other.dims}")
        return BellFunctional(f"{self.name}+{other.name}", self.coeff + other.coeff, None, self.offset + other.offset)


def _check_dims(functional: BellFunctional, dims) -> None:
    if tuple(dims) != functional.dims:
        raise DimensionError(f"functional {functional.name} has dims {functional.dims}, behavior has {tuple(dims)}")


def evaluate(functional: BellFunctional, behavior: Behavior) -> float:
    _check_dims(functional, behavior.dims)
    return float(np.sum(functional.float_coeff * behavior.probs) + float(functional.offset))


def evaluate_exact(functional: BellFunctional, behavior: Behavior) -> Fraction:
    _check_dims(functional, behavior.dims)
    if behavior.exact is None:
        raise ValidationError("exact evaluation needs a behavior with a rational table")
    return exact_sum(functional.coeff * behavior.exact) + functional.offset


def correlator(behavior: Behavior, x: int, y: int) -> float:
    """
    <A_x B_y> = P00 + P11 - P01 - P10 for binary outputs (0-based inputs).
    """
    nx, ny, na, nb = behavior.dims
    if (na, nb) != (2, 2):
        raise DimensionError(f"correlators need binary outputs (got {na}x{nb})")
    if not (0 <= x < nx and 0 <= y < ny):
        raise DimensionError(f"setting ({x}, {y}) out of range for {nx}x{ny} inputs")
    p = behavior.probs[x, y]
    return float(p[0, 0] + p[1, 1] - p[0, 1] - p[1, 0])


def deterministic_value(functional: BellFunctional, alice, bob) -> Fraction:
    value = functional.offset
    for x, a in enumerate(alice):
        for y, b in enumerate(bob):
            value += functional.coeff[x, y, a, b]
    return value


def classical_bound_bruteforce(
    functional: BellFunctional,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Fraction:
    """
    Local (classical) bound: the maximum over deterministic strategies, exact.
    Raises :py:class:`IntegrityError` when it disagrees with the functional's claimed bound.
    """
    nx, ny, na, nb = functional.dims
    count = na**nx * nb**ny
    if count > cap:
        raise CapacityError(f"tried to enumerate {count} deterministic strategies of {functional.name}, cap is {cap}")
    logger.debug("enumerating %d deterministic strategies of %s", count, functional.name)
    alice_maps = list(itertools.product(range(na), repeat=nx))
    bound = max(
        deterministic_value(functional, alice, bob)
        for alice in alice_maps
        for bob in itertools.product(range(nb), repeat=ny)
    )
    logger.debug("functional %s: classical bound %s (claimed %s)", functional.name, bound, functional.claimed_bound)
    if functional.claimed_bound is not None and bound != functional.claimed_bound:
        raise IntegrityError(
            f"functional {functional.name}: brute force bound {bound} differs from the claimed {functional.claimed_bound}",
        )
    return bound


def is_violated(functional: BellFunctional, behavior: Behavior, bound: Fraction = None) -> bool:
    bound = classical_bound_bruteforce(functional) if bound is None else bound
    return evaluate(functional, behavior) > float(bound) + VIOLATION_TOL


def functional_from_game(game: GameSpec, w_a=1, w_b=1) -> BellFunctional:
    """
    The functional whose value on any behavior is w_a * $_A + w_b * $_B:
    coeff = prior(x,y) * (w_a payA + w_b payB)(x,y,a,b).
    """
    w_a, w_b = parse_fraction(w_a), parse_fraction(w_b)
    coeff = game.prior[:, :, None, None] * (w_a * game.pay_a + w_b * game.pay_b)
    return BellFunctional(f"{game.name}[{w_a},{w_b}]", coeff)


def canonical_form(functional: BellFunctional) -> BellFunctional:
    """
    Shift each (x, y) block of coefficients to zero mean, moving the shift into the offset.
    Since sum_{a,b} P(a,b|x,y) = 1, two functionals agree on every behavior exactly when their
    canonical forms are equal.
    """
    nx, ny, na, nb = functional.dims
    coeff = np.array(functional.coeff, dtype=object)
    offset = functional.offset
    for x in range(nx):
        for y in range(ny):
            mean = exact_sum(coeff[x, y]) / (na * nb)
            coeff[x, y] = coeff[x, y] - mean
            offset += mean
    return BellFunctional(functional.name, coeff, functional.claimed_bound, offset)


def is_equivalent(first: BellFunctional, second: BellFunctional) -> bool:
    return first.dims == second.dims and canonical_form(first) == canonical_form(second)
