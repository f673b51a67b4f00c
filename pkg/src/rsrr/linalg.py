"""Dense complex linear-algebra kernel.

Thin contracts over LAPACK (via numpy) so the rest of the package depends on
one error vocabulary and one matrix convention: 2-D ``complex128`` ndarrays
in C (row-major) order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DimensionMismatch, SingularMatrix


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a finite 2-D complex128 array (copying only if needed)."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


@dataclass(frozen=True)
class SvdResult:
    """Full SVD A = U diag(s) V^H with s nonincreasing.

    ``v`` holds the right singular vectors as columns (not the adjoint).
    """

    u: np.ndarray
    singular_values: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class EigResult:
    """Eigenpairs of a square matrix; column j of ``vectors`` pairs with
    ``values[j]``. No ordering is guaranteed."""

    values: np.ndarray
    vectors: np.ndarray


def solve_dense(a, b) -> np.ndarray:
    """Solve A X = B by LU with partial pivoting.

    Raises SingularMatrix when the factorization breaks down, which during
    contour work signals that the evaluation point is numerically an
    eigenvalue and must be perturbed by the caller.
    """
    a = as_complex_matrix(a)
    b = as_complex_matrix(b)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"coefficient matrix is {a.shape}, not square")
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"A is {a.shape} but B has {b.shape[0]} rows")
    try:
        x = np.linalg.solve(a, b)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix(f"dense solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrix("dense solve produced non-finite entries")
    return x


def svd(a) -> SvdResult:
    """Full singular value decomposition (reduced storage)."""
    a = as_complex_matrix(a)
    try:
        u, s, vh = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"SVD did not converge: {exc}") from exc
    return SvdResult(u=u, singular_values=s, v=vh.conj().T)


def eig_dense(a) -> EigResult:
    """Standard dense eigendecomposition of a square matrix."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"eig needs a square matrix, got {a.shape}")
    try:
        values, vectors = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigendecomposition failed: {exc}") from exc
    return EigResult(values=values, vectors=vectors)


def numerical_rank(singular_values, tol: float) -> int:
    """Count of singular values >= tol * sigma_1 (0 for an all-zero list)."""
    s = np.asarray(singular_values, dtype=float)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s >= tol * s[0]))
