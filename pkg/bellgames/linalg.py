"""
Small dense complex linear algebra on numpy arrays: structural predicates, a cyclic Jacobi
eigensolver for Hermitian matrices and Haar-like random samples.
"""
from __future__ import annotations

import logging
from typing import Tuple

import numpy as np

from .errors import DimensionError, IntegrityError, ValidationError

logger = logging.getLogger(__name__)

STRUCTURE_TOL = 1e-10
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
MAX_EIGEN_DIM = 16


def as_complex_matrix(matrix) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2:
        raise DimensionError(f"expected a matrix, got an array of shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError("matrix has non-finite entries")
    return matrix


def is_hermitian(matrix, tol: float = STRUCTURE_TOL) -> bool:
    matrix = as_complex_matrix(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        return False
    return bool(np.abs(matrix - matrix.conj().T).max(initial=0.0) <= tol)


def is_unitary(matrix, tol: float = STRUCTURE_TOL) -> bool:
    matrix = as_complex_matrix(matrix)
    if matrix.shape[0] != matrix.shape[1]:
        return False
    identity = np.eye(matrix.shape[0])
    return bool(np.abs(matrix.conj().T @ matrix - identity).max(initial=0.0) <= tol)


def _off_diagonal_norm(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix - np.diag(np.diag(matrix))))


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """
    Zero a[p, q] in place with a complex Jacobi rotation G: a <- G^H a G, v <- v G.
    The phase of a[p, q] is removed first, leaving a real symmetric 2x2 problem.
    """
    apq = a[p, q]
    magnitude = abs(apq)
    phase = apq / magnitude
    theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    rotation = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=complex)
    index = [p, q]
    a[:, index] = a[:, index] @ rotation
    a[index, :] = rotation.conj().T @ a[index, :]
    v[:, index] = v[:, index] @ rotation
    # clean the rounding left on the annihilated pair
    a[p, q] = a[q, p] = 0.0


def hermitian_eigh(matrix, tol: float = JACOBI_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a Hermitian matrix by cyclic Jacobi sweeps.

    :param matrix: Hermitian matrix (within 1e-10), at most 16x16.
    :param tol: stop once the off-diagonal Frobenius mass falls below tol * max(1, ||matrix||).
    :return: ascending eigenvalues and the matching unit eigenvectors as columns.
    """
    a = as_complex_matrix(matrix).copy()
    n = a.shape[0]
    if a.shape != (n, n):
        raise DimensionError(f"eigensolver needs a square matrix (got {a.shape})")
    if n > MAX_EIGEN_DIM:
        raise DimensionError(f"eigensolver supports up to {MAX_EIGEN_DIM}x{MAX_EIGEN_DIM} (got {n})")
    if not is_hermitian(a):
        raise ValidationError("tried to diagonalize a non-Hermitian matrix")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    for sweep in range(JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(a) <= threshold:
            if sweep > 20:
                logger.warning("Jacobi eigensolver needed %d sweeps for a %dx%d matrix", sweep, n, n)
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                # entries this small cannot keep the total above the threshold
                if abs(a[p, q]) > threshold * 1e-3:
                    _rotate(a, v, p, q)
    else:
        if _off_diagonal_norm(a) > threshold:
            raise IntegrityError(f"Jacobi eigensolver did not converge after {JACOBI_MAX_SWEEPS} sweeps")

    eigenvalues = np.real(np.diag(a))
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]


def hermitian_principal_eigenvector(matrix) -> Tuple[float, np.ndarray]:
    """
    Largest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
    """
    eigenvalues, vectors = hermitian_eigh(matrix)
    vector = vectors[:, -1]
    return float(eigenvalues[-1]), vector / np.linalg.norm(vector)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """
    Haar distributed unitary: QR of a complex Ginibre matrix, with R's diagonal phases moved into Q.
    """
    ginibre = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(ginibre)
    diagonal = np.diag(r)
    phases = diagonal / np.abs(diagonal)
    return q * phases


def random_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    vector = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return vector / np.linalg.norm(vector)
