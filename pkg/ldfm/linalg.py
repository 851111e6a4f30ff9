"""Dense matrix primitives and the Sylvester solvers behind the LDFM updates.

Matrices are plain ``numpy.ndarray`` objects of ``float64``. Every public
function returns a fresh array and never writes to its inputs.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np
from scipy import linalg

from .errors import (
    ConvergenceFailureError,
    DimensionMismatchError,
    NonFiniteError,
    NotPositiveDefiniteError,
    NotSquareError,
    NotSymmetricError,
    SingularPencilError,
    SingularSystemError,
    TooLargeError,
)

logger = logging.getLogger(__name__)

DEFAULT_SYMMETRY_TOL = 1e-8
DEFAULT_KRON_MAX_DIM = 64


class SymEigen(NamedTuple):
    """Eigendecomposition of a symmetric matrix.

    ``eigenvalues`` are sorted ascending and ``eigenvectors`` holds the
    matching orthonormal eigenvectors as columns.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(value, name: str = 'matrix') -> np.ndarray:
    """Convert a value to a finite 2-D ``float64`` array.

    :param value: Array-like value
    :param name: Name used in error messages
    :return np.ndarray: 2-D float array
    :raises DimensionMismatchError: When the value is not 2-D
    :raises NonFiniteError: When some entry is NaN or Inf
    """

    matrix = np.asarray(value, dtype=np.float64)

    if matrix.ndim != 2:
        raise DimensionMismatchError(f"'{name}' must be a 2-D matrix, got {matrix.ndim} dimensions")

    if not np.all(np.isfinite(matrix)):
        raise NonFiniteError(f"'{name}' contains NaN or Inf entries")

    return matrix


def frobenius(matrix: np.ndarray) -> float:
    return float(np.linalg.norm(matrix, 'fro')) if matrix.size else 0.0


def _require_square(matrix: np.ndarray, name: str) -> None:
    if matrix.shape[0] != matrix.shape[1]:
        raise NotSquareError(f"'{name}' must be square, got shape {matrix.shape}")


def sym_eigen(matrix, tol: float = DEFAULT_SYMMETRY_TOL) -> SymEigen:
    """Eigendecomposition of a symmetric matrix.

    The input is symmetrized as ``(M + M.T) / 2`` before the decomposition.

    :param matrix: Square matrix
    :param tol: Accepted asymmetry relative to the largest absolute entry
    :return SymEigen: Ascending eigenvalues and orthonormal eigenvectors
    :raises NotSquareError: When the matrix is not square
    :raises NotSymmetricError: When ``max|M - M.T| > tol * max|M|``
    :raises ConvergenceFailureError: When LAPACK fails to converge
    """

    matrix = as_matrix(matrix, 'M')
    _require_square(matrix, 'M')

    if matrix.size == 0:
        return SymEigen(np.zeros(0), np.zeros((0, 0)))

    scale = float(np.max(np.abs(matrix)))
    asymmetry = float(np.max(np.abs(matrix - matrix.T)))

    if asymmetry > tol * scale:
        raise NotSymmetricError(f'Matrix asymmetry {asymmetry:.3e} exceeds {tol:.1e} * {scale:.3e}')

    try:
        eigenvalues, eigenvectors = linalg.eigh((matrix + matrix.T) / 2.0)
    except linalg.LinAlgError as error:
        raise ConvergenceFailureError(f'Symmetric eigensolver failed: {error}') from error

    return SymEigen(eigenvalues, eigenvectors)


def default_pencil_eps(p_matrix: np.ndarray, q_matrix: np.ndarray) -> float:
    """Scale-relative guard for ``solve_sylvester_sympsd``."""

    size = p_matrix.shape[0] + q_matrix.shape[0]

    return 1e-10 * (float(np.trace(p_matrix)) + float(np.trace(q_matrix))) / max(size, 1)


def _clip_psd(eigenvalues: np.ndarray, eps: float, name: str) -> np.ndarray:
    if eigenvalues.size and eigenvalues[0] < -eps:
        raise SingularPencilError(
            f"'{name}' is not positive semidefinite: smallest eigenvalue {eigenvalues[0]:.3e}")

    return np.maximum(eigenvalues, 0.0)


def _check_residual(residual: float, bound: float, solver: str) -> None:
    logger.debug(f'{solver}: residual {residual:e}, bound {bound:e}')

    if residual > bound:
        logger.warning(f'{solver}: residual {residual:e} above bound {bound:e}, problem is ill conditioned')


def solve_sylvester_sympsd(p_matrix, q_matrix, r_matrix, eps: Optional[float] = None) -> np.ndarray:
    """Solve ``P W + W Q = R`` for symmetric positive semidefinite ``P`` and ``Q``.

    Both operators are diagonalized, ``P = U diag(l) U.T`` and
    ``Q = V diag(m) V.T``, and the solution is ``W = U S V.T`` with
    ``S_ij = (U.T R V)_ij / (l_i + m_j)``.

    :param p_matrix: Symmetric PSD matrix, k x k
    :param q_matrix: Symmetric PSD matrix, d x d
    :param r_matrix: Right hand side, k x d
    :param eps: Pencil guard, defaults to ``1e-10 * (tr P + tr Q) / (k + d)``
    :return np.ndarray: Solution W, k x d
    :raises SingularPencilError: When some ``l_i + m_j <= eps`` or an operator is not PSD
    :raises NotSymmetricError: When P or Q is not symmetric
    """

    p_matrix = as_matrix(p_matrix, 'P')
    q_matrix = as_matrix(q_matrix, 'Q')
    r_matrix = as_matrix(r_matrix, 'R')
    _require_square(p_matrix, 'P')
    _require_square(q_matrix, 'Q')

    if r_matrix.shape != (p_matrix.shape[0], q_matrix.shape[0]):
        raise DimensionMismatchError(
            f'R must be {p_matrix.shape[0]}x{q_matrix.shape[0]}, got {r_matrix.shape[0]}x{r_matrix.shape[1]}')

    if eps is None:
        eps = default_pencil_eps(p_matrix, q_matrix)

    p_values, p_vectors = sym_eigen(p_matrix)
    q_values, q_vectors = sym_eigen(q_matrix)
    p_values = _clip_psd(p_values, eps, 'P')
    q_values = _clip_psd(q_values, eps, 'Q')

    pencil = p_values[:, np.newaxis] + q_values[np.newaxis, :]

    if pencil.size and float(np.min(pencil)) <= eps:
        raise SingularPencilError(
            f'Sylvester pencil is singular: smallest eigenvalue sum {float(np.min(pencil)):.3e} <= {eps:.3e}')

    transformed = p_vectors.T @ r_matrix @ q_vectors
    solution = p_vectors @ (transformed / pencil) @ q_vectors.T

    residual = frobenius(p_matrix @ solution + solution @ q_matrix - r_matrix)
    _check_residual(residual, 1e-8 * (frobenius(r_matrix) + 1.0), 'solve_sylvester_sympsd')

    return solution


def solve_sylvester_kron(p_matrix, q_matrix, r_matrix, max_dim: int = DEFAULT_KRON_MAX_DIM) -> np.ndarray:
    """Solve ``P W + W Q = R`` through its vectorized Kronecker form.

    ``(I_d (x) P + Q.T (x) I_k) vec(W) = vec(R)`` is assembled densely and solved
    directly. The cost is cubic in ``k * d``, so this is only meant to check
    ``solve_sylvester_sympsd`` on small instances.

    :param max_dim: Guard, ``k * d`` may not exceed ``max_dim ** 2``
    :raises TooLargeError: When the system is above the guard
    :raises SingularSystemError: When the Kronecker operator is singular
    """

    p_matrix = as_matrix(p_matrix, 'P')
    q_matrix = as_matrix(q_matrix, 'Q')
    r_matrix = as_matrix(r_matrix, 'R')
    _require_square(p_matrix, 'P')
    _require_square(q_matrix, 'Q')

    rows, cols = p_matrix.shape[0], q_matrix.shape[0]

    if r_matrix.shape != (rows, cols):
        raise DimensionMismatchError(f'R must be {rows}x{cols}, got {r_matrix.shape[0]}x{r_matrix.shape[1]}')

    if rows * cols > max_dim ** 2:
        raise TooLargeError(f'Kronecker system of size {rows * cols} is above the guard {max_dim ** 2}')

    operator = np.kron(np.eye(cols), p_matrix) + np.kron(q_matrix.T, np.eye(rows))

    try:
        vectorized = linalg.solve(operator, r_matrix.flatten(order='F'))
    except (linalg.LinAlgError, ValueError) as error:
        raise SingularSystemError(f'Kronecker system is singular: {error}') from error

    if not np.all(np.isfinite(vectorized)):
        raise SingularSystemError('Kronecker system produced non finite values')

    solution = vectorized.reshape((rows, cols), order='F')

    residual = frobenius(p_matrix @ solution + solution @ q_matrix - r_matrix)
    _check_residual(residual, 1e-8 * (frobenius(r_matrix) + 1.0), 'solve_sylvester_kron')

    return solution


def solve_spd(a_matrix, b_matrix) -> np.ndarray:
    """Solve ``A X = B`` for symmetric positive definite ``A`` by Cholesky.

    :param a_matrix: SPD matrix, m x m
    :param b_matrix: Right hand side, m x n
    :return np.ndarray: Solution X, m x n
    :raises NotPositiveDefiniteError: When the Cholesky factorization fails
    """

    a_matrix = as_matrix(a_matrix, 'A')
    b_matrix = as_matrix(b_matrix, 'B')
    _require_square(a_matrix, 'A')

    if b_matrix.shape[0] != a_matrix.shape[0]:
        raise DimensionMismatchError(f'B must have {a_matrix.shape[0]} rows, got {b_matrix.shape[0]}')

    if a_matrix.size == 0:
        return np.zeros(b_matrix.shape)

    try:
        factor = linalg.cho_factor(a_matrix, lower=True)
    except linalg.LinAlgError as error:
        raise NotPositiveDefiniteError(f'Matrix is not positive definite: {error}') from error

    solution = linalg.cho_solve(factor, b_matrix)

    residual = frobenius(a_matrix @ solution - b_matrix)
    _check_residual(residual, 1e-10 * (frobenius(b_matrix) + 1.0), 'solve_spd')

    return solution
