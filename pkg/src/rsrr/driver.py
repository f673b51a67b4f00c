"""End-to-end eigensolver drivers.

``solve_rsrr`` samples the resolvent on the contour, builds the orthonormal
projection basis by truncated SVD, reduces the problem (explicit sum when
the problem exposes one, Chebyshev interpolation otherwise), solves the
reduced problem on the same contour, and lifts the eigenvectors back with
residuals checked against the original problem. ``solve_ssrr`` is the
moment-scheme baseline: identical pipeline with the sampling matrix
replaced by the quadrature-moment matrix.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import chebfit, subspace
from .contour import Contour
from .errors import InvalidParameter
from .problems import NepProblem, SumFormNep
from .reduced import (ChebyshevReducedNep, EigencountReport, ReducedNep,
                      SumReducedNep, solve_reduced)
from .util import default_threads, parallel_map

logger = logging.getLogger("rsrr")

CONDITION_TARGET = 1e14


@dataclass(frozen=True)
class RsrrConfig:
    """Solver parameters; Table-style presets live in ``presets``."""

    contour: Contour
    probe_width: int = 2          # columns probing the resolvent
    sample_count: int = 32       # nodes on the contour for the eigenspace
    delta: float = 1e-14          # basis SVD truncation threshold
    hankel_blocks: int = 2        # K
    reduced_quadrature: int = 256  # N_S, nodes for the reduced moments
    tol_gap: float = 1e3
    residual_tol: float = 1e-4
    seed: int = 0
    reduction: str = "auto"       # auto | explicit-sum | chebyshev
    chebyshev_degree: int = 40
    threads: int = field(default_factory=default_threads)

    def __post_init__(self):
        if self.sample_count * self.probe_width < 1:
            raise InvalidParameter("need at least one sampling column")
        if self.probe_width < 1 or self.sample_count < 1:
            raise InvalidParameter("probe width and sample count must be >= 1")
        if self.hankel_blocks < 1:
            raise InvalidParameter("need at least one Hankel block")
        if self.reduced_quadrature < 2 * self.hankel_blocks:
            raise InvalidParameter("reduced quadrature must be >= 2K")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParameter("delta must lie in (0, 1)")
        if self.reduction not in ("auto", "explicit-sum", "chebyshev"):
            raise InvalidParameter(f"unknown reduction mode {self.reduction!r}")
        if self.chebyshev_degree < 0:
            raise InvalidParameter("chebyshev degree must be >= 0")


@dataclass(frozen=True)
class EigenSolution:
    """Eigenpairs of the original problem with full run diagnostics.

    Vectors are unit columns with the largest-magnitude component rotated
    real-positive; residuals are measured against the original matrix
    function, never the reduced one.
    """

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    eigencount: EigencountReport
    basis_singular_values: np.ndarray
    k_s: int
    flagged: np.ndarray
    discarded: list
    timings: dict
    method: str
    reduction_mode: str

    @property
    def count(self) -> int:
        return self.values.size


def verify_residuals(problem: NepProblem, values, vectors) -> np.ndarray:
    """Relative residuals ||T(lambda) v||_2 / ||v||_2 against the full
    problem."""
    values = np.atleast_1d(np.asarray(values, dtype=np.complex128))
    out = np.empty(values.size, dtype=float)
    for j, lam in enumerate(values):
        v = vectors[:, j]
        out[j] = np.linalg.norm(problem.apply(lam, v)) / np.linalg.norm(v)
    return out


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    """Deterministic gauge: unit norm, largest-|.| component real-positive."""
    if vectors.size == 0:
        return vectors
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0.0] = 1.0
    vectors = vectors / norms[None, :]
    idx = np.argmax(np.abs(vectors), axis=0)
    anchors = vectors[idx, np.arange(vectors.shape[1])]
    phases = anchors / np.abs(anchors)
    return vectors / phases[None, :]


def _build_reduction(problem: NepProblem, basis: subspace.SubspaceBasis,
                     config: RsrrConfig) -> tuple[ReducedNep, str]:
    mode = config.reduction
    if mode == "auto":
        mode = "explicit-sum" if isinstance(problem, SumFormNep) else "chebyshev"
    if mode == "explicit-sum":
        if not isinstance(problem, SumFormNep):
            raise InvalidParameter("explicit-sum reduction needs a sum-form problem")
        return SumReducedNep(problem.project(basis.matrix)), mode
    lo, hi = config.contour.real_interval()
    s = basis.matrix
    sh = s.conj().T
    nodes = chebfit.chebyshev_nodes(config.chebyshev_degree, lo, hi)
    samples = parallel_map(lambda x: sh @ problem.apply(x, s), nodes,
                           threads=config.threads)
    poly = chebfit.reduce_samples(samples, lo, hi)
    ratio = chebfit.tail_ratio(poly)
    if ratio > 1e-8:
        logger.warning("chebyshev tail coefficient ratio %.2e suggests the "
                       "degree %d under-resolves T(z)", ratio,
                       config.chebyshev_degree)
    return ChebyshevReducedNep(poly), mode


def _basis_condition_check(singular_values: np.ndarray):
    s = singular_values
    if s[-1] > 0 and s[0] / s[-1] < CONDITION_TARGET:
        logger.warning(
            "sampling matrix sigma_1/sigma_end = %.2e < %.0e; consider more "
            "nodes or probe columns", s[0] / s[-1], CONDITION_TARGET)


def _solve_common(problem: NepProblem, config: RsrrConfig, source: np.ndarray,
                  timings: dict, method: str) -> EigenSolution:
    t0 = time.perf_counter()
    basis = subspace.orthonormal_basis(source, config.delta)
    _basis_condition_check(basis.singular_values)
    timings["svd"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    t_s, mode = _build_reduction(problem, basis, config)
    timings["reduction"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    retry = 1e-8 * config.contour.rho
    rsol = solve_reduced(t_s, config.contour, config.reduced_quadrature,
                         config.hankel_blocks, config.tol_gap, retry_scale=retry)
    timings["reduced_solve"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    vectors = _fix_phase(basis.matrix @ rsol.vectors)
    residuals = verify_residuals(problem, rsol.values, vectors) \
        if rsol.values.size else np.empty(0)
    timings["residuals"] = time.perf_counter() - t0
    timings["total"] = sum(timings.values())

    flagged = np.nonzero(residuals > config.residual_tol)[0]
    if flagged.size:
        logger.warning("%s: %d eigenpair(s) exceed residual tolerance %g "
                       "(worst %.3e); returned but flagged", method,
                       flagged.size, config.residual_tol, residuals.max())
    return EigenSolution(values=rsol.values, vectors=vectors,
                         residuals=residuals, eigencount=rsol.eigencount,
                         basis_singular_values=basis.singular_values,
                         k_s=basis.k_s, flagged=flagged,
                         discarded=rsol.discarded, timings=timings,
                         method=method, reduction_mode=mode)


def solve_rsrr(problem: NepProblem, config: RsrrConfig) -> EigenSolution:
    """Resolvent-sampling run: eigenspace from the stacked resolvent blocks."""
    timings = {}
    t0 = time.perf_counter()
    quad = config.contour.quadrature(config.sample_count)
    probe = subspace.make_probe(problem.dimension, config.probe_width, config.seed)
    source = subspace.build_sampling_matrix(
        problem, quad.nodes, probe, retry_scale=1e-8 * config.contour.rho,
        threads=config.threads)
    timings["sampling"] = time.perf_counter() - t0
    return _solve_common(problem, config, source, timings, "rsrr")


def solve_ssrr(problem: NepProblem, config: RsrrConfig,
               k_prime: int | None = None,
               moment_basis: str = "monomial") -> EigenSolution:
    """Moment-scheme baseline: eigenspace from quadrature moments of the
    probed resolvent. ``k_prime`` defaults to the sampling count, the
    largest subspace the moments can span."""
    timings = {}
    t0 = time.perf_counter()
    if k_prime is None:
        k_prime = config.sample_count
    quad = config.contour.quadrature(config.sample_count)
    probe = subspace.make_probe(problem.dimension, config.probe_width, config.seed)
    source = subspace.build_moment_matrix(
        problem, quad, probe, k_prime, basis=moment_basis,
        gamma=config.contour.gamma, rho=config.contour.rho,
        retry_scale=1e-8 * config.contour.rho, threads=config.threads)
    timings["sampling"] = time.perf_counter() - t0
    return _solve_common(problem, config, source, timings, "ssrr")
