"""
Bipartite pure states, rank-1 projective measurements and the Born rule.

State amplitudes are indexed a * dB + b. A measurement is stored as a unitary whose column k is
the basis vector of outcome k. When a measurement has more basis vectors than the game has
outputs, the trailing basis vectors all report the last output.
"""
from __future__ import annotations

import dataclasses
from typing import Sequence, Tuple

import numpy as np

from .errors import DimensionError, ValidationError
from .game import Behavior, GameSpec, PureProfile
from .linalg import STRUCTURE_TOL, as_complex_matrix, random_unit_vector

NORM_TOL = 1e-12


@dataclasses.dataclass(frozen=True, eq=False)
class StateVector:
    d_a: int
    d_b: int
    amp: np.ndarray

    def __post_init__(self):
        amp = np.array(self.amp, dtype=complex).reshape(-1)
        if amp.shape != (self.d_a * self.d_b,):
            raise DimensionError(
                f"state of local dimensions {self.d_a}x{self.d_b} needs {self.d_a * self.d_b} amplitudes "
                f"(got {amp.size})",
            )
        if not np.all(np.isfinite(amp)):
            raise ValidationError("state has non-finite amplitudes")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"state is not normalized (norm {norm!r})")
        amp.flags.writeable = False
        object.__setattr__(self, "amp", amp)

    @classmethod
    def normalized(cls, d_a: int, d_b: int, amp) -> StateVector:
        amp = np.asarray(amp, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amp)
        if norm == 0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(d_a, d_b, amp / norm)

    @property
    def matrix(self) -> np.ndarray:
        """The amplitudes as a d_a x d_b matrix, phi[a, b]."""
        return self.amp.reshape(self.d_a, self.d_b)


@dataclasses.dataclass(frozen=True, eq=False)
class ProjectiveMeasurement:
    """
    A rank-1 projective measurement. ``basis`` holds the basis vectors as columns.
    """

    basis: np.ndarray

    def __post_init__(self):
        basis = as_complex_matrix(self.basis).copy()
        dim = basis.shape[0]
        if basis.shape != (dim, dim):
            raise DimensionError(f"a measurement basis must be square (got {basis.shape})")
        norms = np.linalg.norm(basis, axis=0)
        if np.abs(norms - 1.0).max(initial=0.0) > NORM_TOL:
            raise ValidationError("measurement basis vectors are not unit vectors")
        overlaps = basis.conj().T @ basis - np.eye(dim)
        if np.abs(overlaps).max(initial=0.0) > STRUCTURE_TOL:
            raise ValidationError("measurement basis vectors are not orthogonal")
        basis.flags.writeable = False
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[complex]]) -> ProjectiveMeasurement:
        return cls(np.array(vectors, dtype=complex).T)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def projectors(self, outcomes: int) -> np.ndarray:
        """
        (outcomes, dim, dim) stack of the projectors onto each outcome.
        """
        check_outcomes(self.dim, outcomes)
        projectors = np.zeros((outcomes, self.dim, self.dim), dtype=complex)
        for k in range(self.dim):
            vector = self.basis[:, k]
            projectors[outcome_of(k, outcomes)] += np.outer(vector, vector.conj())
        return projectors


def outcome_of(basis_index: int, outcomes: int) -> int:
    return min(basis_index, outcomes - 1)


def check_outcomes(dim: int, outcomes: int) -> None:
    if outcomes > dim:
        raise DimensionError(f"a {dim}-dimensional projective measurement cannot have {outcomes} outcomes")


@dataclasses.dataclass(frozen=True, eq=False)
class QuantumStrategy:
    state: StateVector
    alice_meas: Tuple[ProjectiveMeasurement, ...]
    bob_meas: Tuple[ProjectiveMeasurement, ...]

    def __post_init__(self):
        object.__setattr__(self, "alice_meas", tuple(self.alice_meas))
        object.__setattr__(self, "bob_meas", tuple(self.bob_meas))
        if not self.alice_meas or not self.bob_meas:
            raise ValidationError("a strategy needs at least one measurement per player")
        if any(m.dim != self.state.d_a for m in self.alice_meas):
            raise DimensionError(f"Alice's measurements must act on dimension {self.state.d_a}")
        if any(m.dim != self.state.d_b for m in self.bob_meas):
            raise DimensionError(f"Bob's measurements must act on dimension {self.state.d_b}")

    @property
    def alice_bases(self) -> np.ndarray:
        return np.stack([m.basis for m in self.alice_meas])

    @property
    def bob_bases(self) -> np.ndarray:
        return np.stack([m.basis for m in self.bob_meas])

    def check(self, dims: Tuple[int, int, int, int]) -> None:
        nx, ny, na, nb = dims
        if len(self.alice_meas) != nx or len(self.bob_meas) != ny:
            raise DimensionError(
                f"strategy has {len(self.alice_meas)}x{len(self.bob_meas)} measurements, needs {nx}x{ny}",
            )
        check_outcomes(self.state.d_a, na)
        check_outcomes(self.state.d_b, nb)

    def replace(self, **changes) -> QuantumStrategy:
        return dataclasses.replace(self, **changes)


def lump_outcomes(probs: np.ndarray, na: int, nb: int) -> np.ndarray:
    """
    Fold a (nx, ny, dA, dB) basis-outcome table into (nx, ny, na, nb) game outputs.
    """
    nx, ny, d_a, d_b = probs.shape
    if (d_a, d_b) == (na, nb):
        return probs
    lumped = np.zeros((nx, ny, na, nb))
    for k in range(d_a):
        for l in range(d_b):
            lumped[:, :, outcome_of(k, na), outcome_of(l, nb)] += probs[:, :, k, l]
    return lumped


def born_probabilities(state: StateVector, alice_bases: np.ndarray, bob_bases: np.ndarray) -> np.ndarray:
    """
    P(k,l|x,y) = |<alpha^x_k, beta^y_l | phi>|^2 for every basis outcome, as a (nx, ny, dA, dB) table.
    <alpha (x) beta|phi> = alpha^H Phi conj(beta), with Phi the amplitude matrix.
    """
    amplitudes = np.einsum("xak,ab,ybl->xykl", alice_bases.conj(), state.matrix, bob_bases.conj())
    return np.abs(amplitudes) ** 2


def behavior_from_quantum(game: GameSpec, strategy: QuantumStrategy) -> Behavior:
    return behavior_for_dims(game.dims, strategy)


def behavior_for_dims(dims: Tuple[int, int, int, int], strategy: QuantumStrategy) -> Behavior:
    strategy.check(dims)
    _, _, na, nb = dims
    probs = born_probabilities(strategy.state, strategy.alice_bases, strategy.bob_bases)
    return Behavior(lump_outcomes(probs, na, nb))


def max_entangled_state(dim: int) -> StateVector:
    """
    (1/sqrt(d)) sum_k |kk>.
    """
    if dim < 2:
        raise ValidationError(f"a maximally entangled state needs dimension >= 2 (got {dim})")
    amp = np.zeros(dim * dim, dtype=complex)
    amp[[k * dim + k for k in range(dim)]] = 1.0 / np.sqrt(dim)
    return StateVector(dim, dim, amp)


def product_state(d_a: int, d_b: int, alice=None, bob=None) -> StateVector:
    alice = np.eye(d_a)[0] if alice is None else np.asarray(alice, dtype=complex)
    bob = np.eye(d_b)[0] if bob is None else np.asarray(bob, dtype=complex)
    return StateVector.normalized(d_a, d_b, np.kron(alice, bob))


def random_state(d_a: int, d_b: int, rng: np.random.Generator) -> StateVector:
    return StateVector.normalized(d_a, d_b, random_unit_vector(d_a * d_b, rng))


def qubit_plane_basis(angle: float) -> ProjectiveMeasurement:
    """
    The real qubit basis at Bloch angle ``angle`` in the x-z plane:
    outcome 0 is cos(angle/2)|0> + sin(angle/2)|1>.
    """
    c, s = np.cos(angle / 2), np.sin(angle / 2)
    return ProjectiveMeasurement(np.array([[c, -s], [s, c]], dtype=complex))


def fourier_basis(dim: int, shift: float, conjugate: bool = False) -> ProjectiveMeasurement:
    """
    Phased discrete Fourier basis: vector k has components exp(+-2 pi i j (k + shift) / d) / sqrt(d).
    """
    j = np.arange(dim)[:, None]
    k = np.arange(dim)[None, :]
    sign = -1.0 if conjugate else 1.0
    return ProjectiveMeasurement(np.exp(sign * 2j * np.pi * j * (k + shift) / dim) / np.sqrt(dim))


def computational_basis(dim: int, first: int = 0) -> ProjectiveMeasurement:
    """
    The computational basis, reordered so that basis vector 0 is |first>.
    """
    order = [first] + [k for k in range(dim) if k != first]
    return ProjectiveMeasurement(np.eye(dim, dtype=complex)[:, order])


def embed_profile(game: GameSpec, profile: PureProfile, dim: int = None) -> QuantumStrategy:
    """
    A product-state strategy that reproduces a pure profile: both players hold |0> and each
    measurement puts |0> on the basis vector of the required output.
    """
    profile.check(game)
    dim = max(game.na, game.nb) if dim is None else dim
    check_outcomes(dim, game.na)
    check_outcomes(dim, game.nb)

    def measurement(output: int) -> ProjectiveMeasurement:
        # |0> must sit on a basis vector reporting `output`; the last output owns the trailing vectors
        basis = np.roll(np.eye(dim, dtype=complex), output, axis=1)
        return ProjectiveMeasurement(basis)

    return QuantumStrategy(
        state=product_state(dim, dim),
        alice_meas=tuple(measurement(a) for a in profile.alice),
        bob_meas=tuple(measurement(b) for b in profile.bob),
    )


def apply_local_unitaries(strategy: QuantumStrategy, u: np.ndarray, v: np.ndarray) -> QuantumStrategy:
    """
    Rotate the state by U (x) V and every basis by the matching local unitary. Born probabilities are unchanged.
    """
    state = StateVector.normalized(strategy.state.d_a, strategy.state.d_b, np.kron(u, v) @ strategy.state.amp)
    return QuantumStrategy(
        state=state,
        alice_meas=tuple(ProjectiveMeasurement(u @ m.basis) for m in strategy.alice_meas),
        bob_meas=tuple(ProjectiveMeasurement(v @ m.basis) for m in strategy.bob_meas),
    )
