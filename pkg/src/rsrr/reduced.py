"""Block Hankel moment solver (Sakurai-Sugiura style) for the projected
problem.

The projected matrix function is small (a few hundred at most), so its
resolvent is inverted directly at the quadrature nodes; no probe matrix is
involved at this level. Contour moments of the inverse feed a block Hankel
pencil whose truncated SVD exposes the eigenvalues; the truncation rank is
the number of enclosed eigenvalues, determined automatically from the
winding number and the largest singular-value gap.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from . import chebfit, linalg
from .contour import Contour
from .errors import (InvalidParameter, NonIntegerWinding, RankCollapse,
                     SingularReduced)
from .linalg import SvdResult

logger = logging.getLogger("rsrr")

_WINDING_SLACK = 0.1
_RANK_FLOOR = 1e-15
_RESIDUAL_FLAG = 1e-4


# ---------------------------------------------------------------------------
# reduced problem forms

class ReducedNep:
    """Small dense matrix function with exact derivative and batch paths."""

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def evaluate(self, z: complex) -> np.ndarray:
        return self.evaluate_many(np.array([z]))[0]

    def derivative(self, z: complex) -> np.ndarray:
        return self.derivative_many(np.array([z]))[0]

    def evaluate_many(self, zs) -> np.ndarray:
        raise NotImplementedError

    def derivative_many(self, zs) -> np.ndarray:
        raise NotImplementedError


class SumReducedNep(ReducedNep):
    """Projected explicit sum: sum_j (S^H C_j S) f_j(z)."""

    def __init__(self, terms):
        if not terms:
            raise InvalidParameter("need at least one projected term")
        self.matrices = np.stack([np.asarray(m, dtype=np.complex128)
                                  for m, _ in terms])
        self.functions = [f for _, f in terms]
        if self.matrices.shape[1] != self.matrices.shape[2]:
            raise InvalidParameter("projected coefficients must be square")

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    def _combine(self, table) -> np.ndarray:
        flat = self.matrices.reshape(len(self.functions), -1)
        out = table @ flat
        return out.reshape(table.shape[0], self.dim, self.dim)

    def evaluate_many(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
        table = np.stack([f.value(zs) for f in self.functions], axis=1)
        return self._combine(table)

    def derivative_many(self, zs) -> np.ndarray:
        zs = np.atleast_1d(np.asarray(zs, dtype=np.complex128))
        table = np.stack([f.deriv(zs) for f in self.functions], axis=1)
        return self._combine(table)


class ChebyshevReducedNep(ReducedNep):
    """Projected Chebyshev interpolant with its exact derivative series."""

    def __init__(self, poly: chebfit.ChebyshevMatrixPoly):
        self.poly = poly
        self.deriv_poly = chebfit.derivative(poly)

    @property
    def dim(self) -> int:
        return self.poly.dim

    def evaluate_many(self, zs) -> np.ndarray:
        return chebfit.evaluate_many(self.poly, zs)

    def derivative_many(self, zs) -> np.ndarray:
        return chebfit.evaluate_many(self.deriv_poly, zs)


# ---------------------------------------------------------------------------
# moments and the Hankel pencil

@dataclass(frozen=True)
class MomentSet:
    """Contour moments A_0 .. A_{2K-1} of the inverse, in the shifted-scaled
    frame (gamma, rho) of the contour they were integrated on."""

    moments: np.ndarray          # (2K, k, k)
    gamma: complex
    rho: float
    quadrature_count: int
    blocks: int
    contour: Contour

    @property
    def dim(self) -> int:
        return self.moments.shape[1]

    def row(self) -> np.ndarray:
        """[A_0 A_1 ... A_{K-1}], the block row used to back-map vectors."""
        return np.hstack(list(self.moments[:self.blocks]))


@dataclass(frozen=True)
class NodeData:
    """Per-node inverses shared between the moment and winding quadratures."""

    nodes: np.ndarray
    weights: np.ndarray
    inverses: np.ndarray


def _invert_nodes(t_s: ReducedNep, contour: Contour, n_s: int,
                  retry_scale: float | None = None) -> NodeData:
    quad = contour.quadrature(n_s)
    nodes = quad.nodes.copy()
    mats = t_s.evaluate_many(nodes)
    try:
        inverses = np.linalg.inv(mats)
        bad = ~np.all(np.isfinite(inverses), axis=(1, 2))
    except np.linalg.LinAlgError:
        inverses = np.empty_like(mats)
        bad = np.ones(nodes.size, dtype=bool)
        for j in range(nodes.size):
            try:
                inverses[j] = np.linalg.inv(mats[j])
            except np.linalg.LinAlgError:
                continue
            bad[j] = ~np.all(np.isfinite(inverses[j]))

    for j in np.nonzero(bad)[0]:
        if retry_scale is None:
            raise SingularReduced(
                f"reduced matrix singular at node {j} (z = {nodes[j]})",
                node_index=int(j))
        diff = nodes[(j + 1) % nodes.size] - nodes[(j - 1) % nodes.size]
        tangent = diff / abs(diff) if diff != 0 else 1j
        z_retry = nodes[j] + retry_scale * tangent
        logger.warning("singular reduced node %d at z = %s; retrying at %s",
                       j, nodes[j], z_retry)
        try:
            inverses[j] = np.linalg.inv(t_s.evaluate_many(np.array([z_retry]))[0])
        except np.linalg.LinAlgError as exc:
            raise SingularReduced(
                f"reduced matrix singular at node {j} even after perturbation",
                node_index=int(j)) from exc
        if not np.all(np.isfinite(inverses[j])):
            raise SingularReduced(
                f"reduced matrix singular at node {j} even after perturbation",
                node_index=int(j))
        nodes[j] = z_retry
    return NodeData(nodes=nodes, weights=quad.weights, inverses=inverses)


def reduced_moments(t_s: ReducedNep, contour: Contour, n_s: int, blocks: int,
                    retry_scale: float | None = None,
                    node_data: NodeData | None = None) -> MomentSet:
    """Quadrature moments of the inverse up to order 2K - 1."""
    if blocks < 1:
        raise InvalidParameter("need at least one Hankel block")
    if n_s < 2 * blocks:
        raise InvalidParameter("quadrature count must be >= 2K to resolve "
                               "the highest moment")
    if node_data is None:
        node_data = _invert_nodes(t_s, contour, n_s, retry_scale)
    gamma, rho = contour.gamma, contour.rho
    scaled = (node_data.nodes - gamma) / rho
    powers = scaled[None, :] ** np.arange(2 * blocks)[:, None]
    coeff = powers * node_data.weights[None, :]
    flat = node_data.inverses.reshape(node_data.nodes.size, -1)
    moments = (coeff @ flat).reshape(2 * blocks, t_s.dim, t_s.dim)
    return MomentSet(moments=moments, gamma=gamma, rho=rho,
                     quadrature_count=n_s, blocks=blocks, contour=contour)


def hankel_pencil(moment_set: MomentSet) -> tuple[np.ndarray, np.ndarray]:
    """Block Hankel pair H = [A_{i+j}], H_shift = [A_{i+j+1}]."""
    a = moment_set.moments
    k = moment_set.blocks
    h = np.block([[a[i + j] for j in range(k)] for i in range(k)])
    h_shift = np.block([[a[i + j + 1] for j in range(k)] for i in range(k)])
    return h, h_shift


# ---------------------------------------------------------------------------
# eigencount

@dataclass(frozen=True)
class EigencountReport:
    """Both eigencount strategies, the chosen count, and how it was chosen."""

    winding_raw: float
    winding: int
    gap_index: int | None
    gap_ratio: float
    tol_gap: float
    chosen: int
    strategy: str
    candidates: tuple[int, ...] = field(default=())


def count_eigenvalues(t_s: ReducedNep, contour: Contour, n_s: int,
                      h_svd: SvdResult, tol_gap: float,
                      retry_scale: float | None = None,
                      node_data: NodeData | None = None) -> EigencountReport:
    """Winding-number count plus the singular-gap strategy on H's spectrum.

    When both strategies are usable and disagree, both candidates are
    reported and the caller resolves by comparing extraction residuals.
    """
    if node_data is None:
        node_data = _invert_nodes(t_s, contour, n_s, retry_scale)
    derivs = t_s.derivative_many(node_data.nodes)
    traces = np.einsum("nij,nji->n", node_data.inverses, derivs)
    winding_value = complex(np.dot(node_data.weights, traces))
    winding_raw = winding_value.real
    rounded = int(round(winding_raw))
    if abs(winding_value - rounded) > _WINDING_SLACK:
        raise NonIntegerWinding(
            f"winding number {winding_value:.6g} is not close to an integer; "
            "quadrature under-resolved or an eigenvalue sits near the contour",
            winding=winding_value)
    if rounded < 0:
        raise NonIntegerWinding(
            f"winding number {winding_raw:.6g} is negative; the reduced "
            "problem has poles inside the contour", winding=winding_value)

    s = h_svd.singular_values
    scan = min(t_s.dim, s.size) - 1
    gap_index, gap_ratio = None, 0.0
    for j in range(1, scan + 1):
        if s[j - 1] <= 0.0:
            break
        ratio = np.inf if s[j] == 0.0 else s[j - 1] / s[j]
        if ratio > gap_ratio:
            gap_ratio, gap_index = float(ratio), j
    gap_ok = gap_index is not None and gap_ratio >= tol_gap

    if gap_ok and gap_index == rounded:
        chosen, strategy, candidates = rounded, "agreement", (rounded,)
    elif not gap_ok:
        chosen, strategy, candidates = rounded, "winding", (rounded,)
    else:
        chosen, strategy = rounded, "disagreement"
        candidates = (rounded, gap_index)
    return EigencountReport(winding_raw=winding_raw, winding=rounded,
                            gap_index=gap_index, gap_ratio=gap_ratio,
                            tol_gap=tol_gap, chosen=chosen, strategy=strategy,
                            candidates=candidates)


# ---------------------------------------------------------------------------
# extraction

def extract_eigenpairs(moment_set: MomentSet, h: np.ndarray, h_shift: np.ndarray,
                       count: int, h_svd: SvdResult | None = None):
    """Eigenpairs of the reduced problem from the truncated Hankel pencil.

    Returns (values, vectors, discarded): values/vectors are the pairs
    whose eigenvalue lies inside the contour (unit-norm vectors), the rest
    are reported as discarded Ritz values.
    """
    if count == 0:
        dim = moment_set.dim
        return (np.empty(0, dtype=np.complex128),
                np.empty((dim, 0), dtype=np.complex128), [])
    capacity = moment_set.blocks * moment_set.dim
    if count > capacity:
        raise RankCollapse(f"requested {count} eigenvalues but the Hankel "
                           f"pencil holds at most {capacity}")
    if h_svd is None:
        h_svd = linalg.svd(h)
    s = h_svd.singular_values
    if s[count - 1] < _RANK_FLOOR * s[0]:
        raise RankCollapse(
            f"singular value {count} of H is below the rank floor "
            f"({s[count - 1]:.3e} vs sigma_1 = {s[0]:.3e})")
    v0 = h_svd.u[:, :count]
    w0 = h_svd.v[:, :count]
    sigma0 = s[:count]
    small = v0.conj().T @ h_shift @ (w0 / sigma0[None, :])
    eig = linalg.eig_dense(small)
    values = moment_set.rho * eig.values + moment_set.gamma
    vectors = moment_set.row() @ (w0 / sigma0[None, :]) @ eig.vectors
    norms = np.linalg.norm(vectors, axis=0)
    norms[norms == 0.0] = 1.0
    vectors = vectors / norms[None, :]

    margin = 1e-10 * moment_set.rho
    inside = np.asarray(moment_set.contour.contains(values, margin=margin))
    discarded = [complex(v) for v in values[~inside]]
    if discarded:
        logger.info("discarding %d exterior Ritz value(s): %s",
                    len(discarded), discarded)
    return values[inside], vectors[:, inside], discarded


# ---------------------------------------------------------------------------
# driver for the reduced problem

@dataclass(frozen=True)
class ReducedSolution:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    eigencount: EigencountReport
    hankel_singular_values: np.ndarray
    discarded: list


def _reduced_residuals(t_s: ReducedNep, values, vectors) -> np.ndarray:
    if values.size == 0:
        return np.empty(0, dtype=float)
    mats = t_s.evaluate_many(values)
    applied = np.einsum("nij,jn->in", mats, vectors)
    return np.linalg.norm(applied, axis=0) / np.linalg.norm(vectors, axis=0)


def _sorted_by_position(values, vectors, residuals):
    order = np.lexsort((values.imag, values.real))
    return values[order], vectors[:, order], residuals[order]


def solve_reduced(t_s: ReducedNep, contour: Contour, n_s: int, blocks: int,
                  tol_gap: float = 1e3,
                  retry_scale: float | None = None) -> ReducedSolution:
    """Full reduced solve: moments, Hankel pencil, eigencount, extraction.

    A disagreement between the winding and gap counts is resolved by
    extracting both candidate sets and keeping the one with the smaller
    maximum residual.
    """
    node_data = _invert_nodes(t_s, contour, n_s, retry_scale)
    moment_set = reduced_moments(t_s, contour, n_s, blocks, node_data=node_data)
    h, h_shift = hankel_pencil(moment_set)
    h_svd = linalg.svd(h)
    report = count_eigenvalues(t_s, contour, n_s, h_svd, tol_gap,
                               node_data=node_data)

    def run(count):
        values, vectors, discarded = extract_eigenpairs(
            moment_set, h, h_shift, count, h_svd=h_svd)
        residuals = _reduced_residuals(t_s, values, vectors)
        return values, vectors, residuals, discarded

    if report.strategy == "disagreement":
        trials = {}
        for candidate in report.candidates:
            try:
                trials[candidate] = run(candidate)
            except RankCollapse as exc:
                logger.warning("candidate count %d rejected: %s", candidate, exc)
        if not trials:
            raise RankCollapse("both eigencount candidates hit the rank floor")
        def worst(item):
            residuals = item[1][2]
            return residuals.max() if residuals.size else np.inf
        chosen = min(trials.items(), key=worst)[0]
        values, vectors, residuals, discarded = trials[chosen]
        source = "winding" if chosen == report.winding else "gap"
        report = replace(report, chosen=chosen, strategy=f"residual:{source}")
        logger.info("eigencount disagreement resolved to %d (%s)", chosen,
                    report.strategy)
    else:
        values, vectors, residuals, discarded = run(report.chosen)

    flagged = np.nonzero(residuals > _RESIDUAL_FLAG)[0]
    if flagged.size:
        logger.warning("%d reduced eigenpair(s) exceed residual %g; worst %.3e",
                       flagged.size, _RESIDUAL_FLAG, residuals.max())
    values, vectors, residuals = _sorted_by_position(values, vectors, residuals)
    return ReducedSolution(values=values, vectors=vectors, residuals=residuals,
                           eigencount=report,
                           hankel_singular_values=h_svd.singular_values,
                           discarded=discarded)
