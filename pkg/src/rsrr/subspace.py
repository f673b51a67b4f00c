"""Eigenspace construction from the resolvent.

Two schemes build an n x m matrix whose range approximates the eigenspace
of the eigenvalues enclosed by the sampling nodes:

* the sampling scheme stacks the probed resolvent blocks T(z_i)^{-1} U
  side by side (one block per node);
* the moment scheme combines the same blocks into quadrature moments
  weighted by basis functions of the node location (one block per order).

The orthonormal basis used for the Rayleigh-Ritz projection is the
truncated SVD of either matrix.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import linalg
from .contour import QuadratureSet
from .errors import EmptyBasis, InvalidParameter, SingularMatrix
from .problems import NepProblem
from .util import parallel_map

logger = logging.getLogger("rsrr")


@dataclass(frozen=True)
class ProbeMatrix:
    """Full-column-rank probe applied to the resolvent at every node."""

    u: np.ndarray
    seed: int

    @property
    def width(self) -> int:
        return self.u.shape[1]


def make_probe(n: int, width: int, seed: int) -> ProbeMatrix:
    """Seeded probe with independent standard-normal real/imaginary parts.

    Complex Gaussian entries avoid the real-axis degeneracies a real probe
    can hit; the width must be at least the largest algebraic multiplicity
    among the target eigenvalues.
    """
    if n < 1 or width < 1:
        raise InvalidParameter("probe needs n >= 1 and width >= 1")
    if width > n:
        raise InvalidParameter("probe cannot be wider than the problem dimension")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((n, width)) + 1j * rng.standard_normal((n, width))
    return ProbeMatrix(u=u, seed=seed)


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis with the full singular spectrum of its source."""

    matrix: np.ndarray
    singular_values: np.ndarray
    delta: float

    @property
    def k_s(self) -> int:
        return self.matrix.shape[1]


def _tangents(nodes: np.ndarray) -> np.ndarray:
    """Unit tangent estimates from neighbor differences (used only to pick a
    perturbation direction when a node lands on an eigenvalue)."""
    n = nodes.size
    if n < 3:
        return np.full(n, 1j)
    diffs = np.roll(nodes, -1) - np.roll(nodes, 1)
    mags = np.abs(diffs)
    safe = np.where(mags > 0, mags, 1.0)
    return np.where(mags > 0, diffs / safe, 1j)


def solve_at_nodes(problem: NepProblem, nodes, probe: ProbeMatrix,
                   retry_scale: float | None = None, threads: int = 1) -> list:
    """Resolvent blocks T(z_i)^{-1} U for every node, in node order.

    On a singular node the node is perturbed tangentially by ``retry_scale``
    and retried once; a second failure (or a failure with no retry scale)
    raises SingularMatrix carrying the node index.
    """
    nodes = np.asarray(nodes, dtype=np.complex128)
    tangents = _tangents(nodes)

    def solve_one(i):
        z = nodes[i]
        try:
            return problem.solve(z, probe.u)
        except SingularMatrix as exc:
            if retry_scale is None:
                raise SingularMatrix(
                    f"node {i} at z = {z} is numerically an eigenvalue: {exc}",
                    node_index=i) from exc
            z_retry = z + retry_scale * tangents[i]
            logger.warning("singular node %d at z = %s; retrying at %s", i, z, z_retry)
            try:
                return problem.solve(z_retry, probe.u)
            except SingularMatrix as exc2:
                raise SingularMatrix(
                    f"node {i} singular at z = {z} and after tangential "
                    f"perturbation to {z_retry}", node_index=i) from exc2

    return parallel_map(solve_one, range(nodes.size), threads=threads)


def build_sampling_matrix(problem: NepProblem, nodes, probe: ProbeMatrix,
                          retry_scale: float | None = None,
                          threads: int = 1) -> np.ndarray:
    """Stack the probed resolvent blocks into an n x (N * L) matrix, block
    column order following the node order."""
    blocks = solve_at_nodes(problem, nodes, probe, retry_scale, threads)
    return np.hstack(blocks)


def _frame(nodes, gamma, rho):
    nodes = np.asarray(nodes, dtype=np.complex128)
    if gamma is None:
        gamma = complex(nodes.mean())
    if rho is None:
        rho = float(np.max(np.abs(nodes - gamma)))
        if rho == 0.0:
            rho = 1.0
    return gamma, rho


def _basis_table(nodes, k_prime, basis, gamma, rho):
    """k_prime x N table of basis-function values at the nodes, in the
    shifted-scaled frame (z - gamma) / rho to keep high orders bounded."""
    w = (np.asarray(nodes, dtype=np.complex128) - gamma) / rho
    if basis == "monomial":
        return w[None, :] ** np.arange(k_prime)[:, None]
    if basis == "chebyshev":
        table = np.empty((k_prime, w.size), dtype=np.complex128)
        table[0] = 1.0
        if k_prime > 1:
            table[1] = w
        for j in range(2, k_prime):
            table[j] = 2.0 * w * table[j - 1] - table[j - 2]
        return table
    raise InvalidParameter(f"unknown basis {basis!r}")


def build_moment_matrix(problem: NepProblem, quad: QuadratureSet,
                        probe: ProbeMatrix, k_prime: int,
                        basis: str = "monomial",
                        gamma: complex | None = None, rho: float | None = None,
                        retry_scale: float | None = None,
                        threads: int = 1) -> np.ndarray:
    """Quadrature moments of the probed resolvent, stacked by order into an
    n x (K' * L) matrix.

    Every column block lies in the range of the sampling matrix built from
    the same nodes, so this basis can never beat the sampling one in rank.
    """
    if k_prime < 1:
        raise InvalidParameter("moment order count must be >= 1")
    gamma, rho = _frame(quad.nodes, gamma, rho)
    blocks = solve_at_nodes(problem, quad.nodes, probe, retry_scale, threads)
    stack = np.stack(blocks)                      # (N, n, L)
    table = _basis_table(quad.nodes, k_prime, basis, gamma, rho)
    coeff = table * quad.weights[None, :]         # (K', N)
    moments = np.tensordot(coeff, stack, axes=([1], [0]))   # (K', n, L)
    return np.hstack(list(moments))


def orthonormal_basis(source, delta: float) -> SubspaceBasis:
    """Truncated-SVD basis: keep left singular vectors with
    sigma_i >= delta * sigma_1; retain the full sigma list for diagnostics."""
    if not 0.0 < delta < 1.0:
        raise InvalidParameter("truncation threshold must lie in (0, 1)")
    result = linalg.svd(source)
    s = result.singular_values
    if s.size == 0 or s[0] == 0.0 or not np.isfinite(s[0]):
        raise EmptyBasis("source matrix is numerically zero")
    k = linalg.numerical_rank(s, delta)
    return SubspaceBasis(matrix=result.u[:, :k], singular_values=s, delta=delta)


def vandermonde_rank_experiment(eigs, k_max: int, tol: float,
                                basis: str = "monomial") -> list[tuple[int, int]]:
    """Numerical rank of the generalized Vandermonde matrix B (one row per
    eigenvalue, one column per basis order) for every order count up to
    ``k_max``.

    The Chebyshev variant maps the eigenvalue hull onto [-1, 1]; the
    monomial variant uses raw powers, whose rank saturates long before the
    column count for clustered spectra.
    """
    if not 0.0 < tol < 1.0:
        raise InvalidParameter("rank tolerance must lie in (0, 1)")
    if k_max < 2:
        raise InvalidParameter("k_max must be >= 2")
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size < 1:
        raise InvalidParameter("need at least one eigenvalue")

    if basis == "monomial":
        columns = eigs[:, None] ** np.arange(k_max)[None, :]
    elif basis == "chebyshev":
        lo, hi = float(eigs.min()), float(eigs.max())
        if hi - lo < 1e-300:
            lo, hi = lo - 1.0, hi + 1.0
        m = (2.0 * eigs - lo - hi) / (hi - lo)
        columns = np.empty((eigs.size, k_max))
        columns[:, 0] = 1.0
        if k_max > 1:
            columns[:, 1] = m
        for j in range(2, k_max):
            columns[:, j] = 2.0 * m * columns[:, j - 1] - columns[:, j - 2]
    else:
        raise InvalidParameter(f"unknown basis {basis!r}")

    table = []
    for k_prime in range(1, k_max + 1):
        s = np.linalg.svd(columns[:, :k_prime], compute_uv=False)
        table.append((k_prime, linalg.numerical_rank(s, tol)))
    return table
