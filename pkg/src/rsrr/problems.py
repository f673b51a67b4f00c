"""Nonlinear eigenvalue problems T(z) v = 0.

The problem interface exposes the dimension, assembly of T(z) and dT/dz,
matrix application, and resolvent solves X = T(z)^{-1} B. Problems whose
matrix is an explicit sum  T(z) = sum_j C_j f_j(z)  carry their coefficient
matrices and scalar terms so projections and derivatives stay exact. The
scalar terms form a closed vocabulary (powers, rational a*z/(z+b), square
root branches, constants, Chebyshev basis values) rather than a general
expression parser, keeping derivatives exact and auditable.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.linalg

from . import linalg
from .errors import (DimensionMismatch, InvalidParameter, PoleEvaluation,
                     SingularMatrix)

_POLE_TOL = 1e-12


# ---------------------------------------------------------------------------
# scalar term vocabulary

class ScalarTerm:
    """A scalar coefficient function f(z) with an exact derivative.

    ``value`` and ``deriv`` accept scalars or ndarrays of points.
    """

    def value(self, z):
        raise NotImplementedError

    def deriv(self, z):
        raise NotImplementedError


class Monomial(ScalarTerm):
    def __init__(self, k: int):
        if k < 0:
            raise InvalidParameter("monomial power must be >= 0")
        self.k = k

    def value(self, z):
        z = np.asarray(z)
        return np.ones_like(z) if self.k == 0 else z ** self.k

    def deriv(self, z):
        z = np.asarray(z)
        if self.k == 0:
            return np.zeros_like(z)
        if self.k == 1:
            return np.ones_like(z)
        return self.k * z ** (self.k - 1)

    def __repr__(self):
        return f"Monomial({self.k})"


class Constant(ScalarTerm):
    def __init__(self, c: complex):
        self.c = complex(c)

    def value(self, z):
        return np.full_like(np.asarray(z, dtype=np.complex128), self.c)

    def deriv(self, z):
        return np.zeros_like(np.asarray(z, dtype=np.complex128))

    def __repr__(self):
        return f"Constant({self.c})"


class RationalPole(ScalarTerm):
    """a * z / (z + b), a single simple pole at z = -b."""

    def __init__(self, a: complex, b: complex):
        self.a = complex(a)
        self.b = complex(b)

    def _check(self, z):
        if np.any(np.abs(np.asarray(z) + self.b) < _POLE_TOL * max(1.0, abs(self.b))):
            raise PoleEvaluation(f"evaluation at the pole z = {-self.b}")

    def value(self, z):
        self._check(z)
        z = np.asarray(z)
        return self.a * z / (z + self.b)

    def deriv(self, z):
        self._check(z)
        z = np.asarray(z)
        return self.a * self.b / (z + self.b) ** 2

    def __repr__(self):
        return f"RationalPole(a={self.a}, b={self.b})"


class SqrtBranch(ScalarTerm):
    """i * sqrt(z^2 - sigma^2), principal branch.

    The cut sits where z^2 - sigma^2 is negative real; for sigma = 0 and
    Re z > 0 the term reduces to i*z.
    """

    def __init__(self, sigma: float):
        if sigma < 0:
            raise InvalidParameter("branch parameter sigma must be >= 0")
        self.sigma = float(sigma)

    def value(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return 1j * np.sqrt(z * z - self.sigma ** 2)

    def deriv(self, z):
        z = np.asarray(z, dtype=np.complex128)
        w = z * z - self.sigma ** 2
        if np.any(np.abs(w) < _POLE_TOL * max(1.0, self.sigma ** 2)):
            raise PoleEvaluation(f"derivative at the branch point |z| = {self.sigma}")
        return 1j * z / np.sqrt(w)

    def __repr__(self):
        return f"SqrtBranch(sigma={self.sigma})"


class ChebyshevBasis(ScalarTerm):
    """First-kind Chebyshev polynomial of the variable mapped from [lo, hi]."""

    def __init__(self, k: int, lo: float = -1.0, hi: float = 1.0):
        if k < 0:
            raise InvalidParameter("basis order must be >= 0")
        if not lo < hi:
            raise InvalidParameter("interval must satisfy lo < hi")
        self.k = k
        self.lo = float(lo)
        self.hi = float(hi)
        self._coef = np.zeros(k + 1)
        self._coef[k] = 1.0
        self._dcoef = np.polynomial.chebyshev.chebder(self._coef)

    def _map(self, z):
        return (2.0 * np.asarray(z) - self.lo - self.hi) / (self.hi - self.lo)

    def value(self, z):
        return np.polynomial.chebyshev.chebval(self._map(z), self._coef)

    def deriv(self, z):
        inner = np.polynomial.chebyshev.chebval(self._map(z), self._dcoef)
        return inner * 2.0 / (self.hi - self.lo)

    def __repr__(self):
        return f"ChebyshevBasis(k={self.k}, interval=({self.lo}, {self.hi}))"


# ---------------------------------------------------------------------------
# problem interface

def _as_block(b) -> tuple[np.ndarray, bool]:
    """View b as an (n, k) block; report whether it arrived 1-D."""
    b = np.asarray(b, dtype=np.complex128)
    if b.ndim == 1:
        return b[:, None], True
    return b, False


class NepProblem:
    """Matrix function T(z) with resolvent solves."""

    @property
    def dimension(self) -> int:
        raise NotImplementedError

    def assemble(self, z: complex) -> np.ndarray:
        """Dense T(z)."""
        raise NotImplementedError

    def derivative_assemble(self, z: complex) -> np.ndarray:
        """Dense dT/dz."""
        raise NotImplementedError

    def apply(self, z: complex, v: np.ndarray) -> np.ndarray:
        """T(z) @ v without forcing a dense assembly in subclasses."""
        return self.assemble(z) @ v

    def solve(self, z: complex, b: np.ndarray) -> np.ndarray:
        """X = T(z)^{-1} B."""
        return self.dense_solve(z, b)

    def dense_solve(self, z: complex, b: np.ndarray) -> np.ndarray:
        """Reference solve through the dense kernel, for cross-checking
        structured implementations."""
        block, was_vector = _as_block(b)
        x = linalg.solve_dense(self.assemble(z), block)
        return x[:, 0] if was_vector else x


class SumFormNep(NepProblem):
    """T(z) = sum_j C_j f_j(z) with explicit coefficients and scalar terms.

    Coefficients may be dense ndarrays or scipy sparse matrices; solves pick
    a dense LU or sparse LU accordingly.
    """

    def __init__(self, terms):
        if len(terms) < 1:
            raise InvalidParameter("a sum-form problem needs at least one term")
        self.coefficients = []
        self.functions = []
        n = None
        for coef, func in terms:
            if not sp.issparse(coef):
                coef = linalg.as_complex_matrix(coef)
            if coef.shape[0] != coef.shape[1]:
                raise DimensionMismatch(f"coefficient matrix is {coef.shape}, not square")
            if n is None:
                n = coef.shape[0]
            elif coef.shape[0] != n:
                raise DimensionMismatch(
                    f"coefficient matrices disagree: {coef.shape[0]} vs {n}")
            if not isinstance(func, ScalarTerm):
                raise InvalidParameter(f"{func!r} is not a scalar term")
            self.coefficients.append(coef)
            self.functions.append(func)
        self._n = n
        self._sparse = any(sp.issparse(c) for c in self.coefficients)

    @property
    def dimension(self) -> int:
        return self._n

    def scalar_values(self, z) -> np.ndarray:
        return np.array([f.value(z) for f in self.functions])

    def scalar_derivs(self, z) -> np.ndarray:
        return np.array([f.deriv(z) for f in self.functions])

    def _combine(self, weights):
        acc = None
        for w, coef in zip(weights, self.coefficients):
            part = coef * complex(w)
            acc = part if acc is None else acc + part
        return acc

    def assemble(self, z):
        m = self._combine(self.scalar_values(z))
        return m.toarray() if sp.issparse(m) else m

    def derivative_assemble(self, z):
        m = self._combine(self.scalar_derivs(z))
        return m.toarray() if sp.issparse(m) else m

    def apply(self, z, v):
        vals = self.scalar_values(z)
        acc = np.zeros_like(np.asarray(v, dtype=np.complex128))
        for w, coef in zip(vals, self.coefficients):
            acc += complex(w) * (coef @ v)
        return acc

    def solve(self, z, b):
        if not self._sparse:
            return self.dense_solve(z, b)
        import scipy.sparse.linalg as spla
        m = sp.csc_matrix(self._combine(self.scalar_values(z)))
        try:
            lu = spla.splu(m)
        except RuntimeError as exc:
            raise SingularMatrix(f"sparse factorization failed: {exc}") from exc
        x = lu.solve(np.asarray(b, dtype=np.complex128))
        if not np.all(np.isfinite(x)):
            raise SingularMatrix("sparse solve produced non-finite entries")
        return x

    def project(self, s: np.ndarray):
        """Projected terms (S^H C_j S, f_j) for the Rayleigh-Ritz reduction."""
        sh = s.conj().T
        return [(sh @ (coef @ s), func)
                for coef, func in zip(self.coefficients, self.functions)]


class TridiagonalSumNep(SumFormNep):
    """Sum-form problem whose assembled matrix is tridiagonal for every z;
    solves run through a banded factorization in O(n)."""

    def __init__(self, terms):
        super().__init__(terms)
        self._bands = [self._extract_bands(c) for c in self.coefficients]

    @staticmethod
    def _extract_bands(coef):
        dense_diag = (lambda k: coef.diagonal(k)) if sp.issparse(coef) \
            else (lambda k: np.diagonal(coef, k))
        n = coef.shape[0]
        band = np.zeros((3, n), dtype=np.complex128)
        band[0, 1:] = dense_diag(1)
        band[1, :] = dense_diag(0)
        band[2, :-1] = dense_diag(-1)
        return band

    def solve(self, z, b):
        vals = self.scalar_values(z)
        ab = np.zeros_like(self._bands[0])
        for w, band in zip(vals, self._bands):
            ab += complex(w) * band
        b = np.asarray(b, dtype=np.complex128)
        try:
            x = scipy.linalg.solve_banded((1, 1), ab, b)
        except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as exc:
            raise SingularMatrix(f"banded solve failed: {exc}") from exc
        if not np.all(np.isfinite(x)):
            raise SingularMatrix("banded solve produced non-finite entries")
        return x


# ---------------------------------------------------------------------------
# built-in problem generators

def _tridiag(n, lower, diag, upper):
    return sp.diags([np.full(n - 1, lower), np.full(n, diag), np.full(n - 1, upper)],
                    offsets=(-1, 0, 1), format="lil", dtype=np.complex128)


def make_acoustic_1d(n: int, zeta: complex) -> NepProblem:
    """1-D acoustic FEM problem, quadratic: T(z) = z^2 M + z C + K.

    Dirichlet at one end, impedance ``zeta`` at the other. All three
    coefficient matrices only touch the tridiagonal band, so the structured
    solve factors the assembled tridiagonal matrix directly.
    """
    if n < 2:
        raise InvalidParameter("acoustic problem needs n >= 2")
    if zeta == 0:
        raise InvalidParameter("impedance zeta must be nonzero")
    mass = sp.diags(np.full(n, -4.0 * np.pi ** 2 / n), dtype=np.complex128).tolil()
    mass[n - 1, n - 1] = -2.0 * np.pi ** 2 / n
    damping = sp.lil_matrix((n, n), dtype=np.complex128)
    damping[n - 1, n - 1] = 2.0j * np.pi / zeta
    stiffness = _tridiag(n, -n, 2 * n, -n)
    stiffness[n - 1, n - 1] = n
    terms = [(stiffness.tocsr(), Monomial(0)),
             (damping.tocsr(), Monomial(1)),
             (mass.tocsr(), Monomial(2))]
    return TridiagonalSumNep(terms)


def make_loaded_string(n: int) -> NepProblem:
    """String with an elastically attached unit mass, rational in z:
    T(z) = T1 + z/(z-1) * e_n e_n^T - z * T3. Pole at z = 1.

    The free-end stiffness entry carries the half stencil (T1[n-1, n-1] = n),
    matching the standard benchmark matrices; the companion mass entry is
    2 / (6n).
    """
    if n < 2:
        raise InvalidParameter("string problem needs n >= 2")
    t1 = _tridiag(n, -n, 2 * n, -n)
    t1[n - 1, n - 1] = n
    load = sp.lil_matrix((n, n), dtype=np.complex128)
    load[n - 1, n - 1] = 1.0
    t3 = _tridiag(n, 1.0 / (6 * n), 4.0 / (6 * n), 1.0 / (6 * n))
    t3[n - 1, n - 1] = 2.0 / (6 * n)
    terms = [(t1.tocsr(), Monomial(0)),
             (load.tocsr(), RationalPole(1.0, -1.0)),
             ((-t3).tocsr(), Monomial(1))]
    return TridiagonalSumNep(terms)


def make_gun_form(stiffness, mass, w1, w2, sigma1: float, sigma2: float) -> SumFormNep:
    """Radio-frequency gun cavity form:
    T(z) = K - z^2 M + i sqrt(z^2 - sigma1^2) W1 + i sqrt(z^2 - sigma2^2) W2."""
    if sigma1 < 0 or sigma2 < 0:
        raise InvalidParameter("branch parameters must be >= 0")
    mats = [m if sp.issparse(m) else np.asarray(m, dtype=np.complex128)
            for m in (stiffness, mass, w1, w2)]
    dims = {m.shape[0] for m in mats} | {m.shape[1] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"coefficient matrices disagree in size: {sorted(dims)}")
    stiffness, mass, w1, w2 = mats
    return SumFormNep([(stiffness, Monomial(0)),
                       (-mass, Monomial(2)),
                       (w1, SqrtBranch(sigma1)),
                       (w2, SqrtBranch(sigma2))])


def make_biot_damped(mass, visco, stiffness, g_inf: float, a_coeffs, b_coeffs,
                     leading_one: bool = False) -> SumFormNep:
    """Viscoelastic structure with a Biot shear modulus:
    T(z) = z^2 M + G(z) K_v + K  with  G(z) = G_inf * sum_k a_k z / (z + b_k),
    or G_inf * (1 + sum_k ...) when ``leading_one`` is set."""
    a_coeffs = [float(a) for a in a_coeffs]
    b_coeffs = [float(b) for b in b_coeffs]
    if len(a_coeffs) != len(b_coeffs) or not a_coeffs:
        raise InvalidParameter("need matching, nonempty a/b coefficient lists")
    if any(b <= 0 for b in b_coeffs):
        raise InvalidParameter("pole offsets b_k must be positive")
    mats = [m if sp.issparse(m) else np.asarray(m, dtype=np.complex128)
            for m in (mass, visco, stiffness)]
    dims = {m.shape[0] for m in mats} | {m.shape[1] for m in mats}
    if len(dims) != 1:
        raise DimensionMismatch(f"coefficient matrices disagree in size: {sorted(dims)}")
    mass, visco, stiffness = mats
    scaled_visco = visco * g_inf
    terms = [(mass, Monomial(2)), (stiffness, Monomial(0))]
    if leading_one:
        terms.append((scaled_visco, Constant(1.0)))
    terms.extend((scaled_visco, RationalPole(a, b))
                 for a, b in zip(a_coeffs, b_coeffs))
    return SumFormNep(terms)


def make_linear_pencil(a) -> SumFormNep:
    """T(z) = A - z I; the eigenvalues of T are the eigenvalues of A."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"need a square matrix, got shape {a.shape}")
    eye = np.eye(a.shape[0], dtype=np.complex128)
    return SumFormNep([(a, Monomial(0)), (-eye, Monomial(1))])
