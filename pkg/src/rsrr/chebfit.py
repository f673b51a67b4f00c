"""Chebyshev interpolation of a black-box matrix function on a real interval.

Turns a sampler z -> T(z) into an explicit polynomial sum(P_j * tau_j(m(z)))
with m the affine map of [lo, hi] onto [-1, 1]. This gives problems with no
closed-form z-dependence (dense boundary-element matrices being the typical
case) the explicit form the Rayleigh-Ritz reduction needs. Evaluation also
accepts complex arguments; the accuracy off the interval degrades with the
distance from the interval's Bernstein ellipse, so keep the contour flat
around the interval and watch the tail-coefficient diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter


@dataclass(frozen=True)
class ChebyshevMatrixPoly:
    """Matrix-valued Chebyshev series: coefficients[j] multiplies tau_j."""

    coefficients: np.ndarray     # (degree + 1, m, m)
    lo: float
    hi: float

    def __post_init__(self):
        if self.coefficients.ndim != 3:
            raise InvalidParameter("coefficients must be a (d+1, m, m) stack")
        if not self.lo < self.hi:
            raise InvalidParameter("interval must satisfy lo < hi")

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.coefficients.shape[1]

    def map_argument(self, z):
        return (2.0 * np.asarray(z, dtype=np.complex128) - self.lo - self.hi) \
            / (self.hi - self.lo)


def chebyshev_nodes(degree: int, lo: float, hi: float) -> np.ndarray:
    """The d+1 first-kind Chebyshev points of [lo, hi], in decreasing-cosine
    order (node j is the image of cos((j + 1/2) pi / (d + 1)))."""
    if degree < 0:
        raise InvalidParameter("degree must be >= 0")
    if not lo < hi:
        raise InvalidParameter("interval must satisfy lo < hi")
    theta = (np.arange(degree + 1) + 0.5) * np.pi / (degree + 1)
    return lo + (hi - lo) * 0.5 * (np.cos(theta) + 1.0)


def _transform(samples: np.ndarray, lo: float, hi: float) -> ChebyshevMatrixPoly:
    """Discrete cosine transform of first-kind node samples into series
    coefficients. The j = 0 coefficient takes half the uniform factor so a
    constant sampler yields exactly its own value."""
    count = samples.shape[0]
    theta = (np.arange(count) + 0.5) * np.pi / count
    table = np.cos(np.outer(np.arange(count), theta)) * (2.0 / count)
    table[0] *= 0.5
    coeffs = np.tensordot(table, samples, axes=([1], [0]))
    # Trailing coefficients at the transform's roundoff floor are noise, not
    # signal; evaluating them off the interval amplifies that noise, so zero
    # the trailing run below the floor.
    norms = np.linalg.norm(coeffs.reshape(count, -1), axis=1)
    floor = 64.0 * np.finfo(float).eps * norms.max()
    j = count - 1
    while j > 0 and norms[j] < floor:
        coeffs[j] = 0.0
        j -= 1
    return ChebyshevMatrixPoly(coefficients=coeffs, lo=lo, hi=hi)


def interpolate_matrix(sampler, degree: int, lo: float, hi: float) -> ChebyshevMatrixPoly:
    """Interpolate the matrix function through the d+1 Chebyshev nodes."""
    nodes = chebyshev_nodes(degree, lo, hi)
    samples = np.stack([np.asarray(sampler(x), dtype=np.complex128) for x in nodes])
    if samples.ndim != 3 or samples.shape[1] != samples.shape[2]:
        raise InvalidParameter("sampler must return square matrices")
    return _transform(samples, lo, hi)


def reduce_interpolant(sampler, basis, degree: int, lo: float, hi: float
                       ) -> ChebyshevMatrixPoly:
    """Interpolate the projected function S^H T(x) S; each sample is
    projected before the transform, which commutes with projecting the full
    interpolant afterwards."""
    s = basis.matrix if hasattr(basis, "matrix") else np.asarray(basis)
    sh = s.conj().T
    nodes = chebyshev_nodes(degree, lo, hi)
    samples = np.stack([sh @ (np.asarray(sampler(x), dtype=np.complex128) @ s)
                        for x in nodes])
    return _transform(samples, lo, hi)


def reduce_samples(samples, lo: float, hi: float) -> ChebyshevMatrixPoly:
    """Transform already-projected node samples (in chebyshev_nodes order);
    the matrix-free path for problems where assembling T(x) is too costly."""
    samples = np.stack([np.asarray(m, dtype=np.complex128) for m in samples])
    return _transform(samples, lo, hi)


def evaluate(poly: ChebyshevMatrixPoly, z: complex) -> np.ndarray:
    """Clenshaw evaluation at a (possibly complex) argument."""
    x = complex(poly.map_argument(z))
    c = poly.coefficients
    shape = c.shape[1:]
    b1 = np.zeros(shape, dtype=np.complex128)
    b2 = np.zeros(shape, dtype=np.complex128)
    for j in range(poly.degree, 0, -1):
        b1, b2 = 2.0 * x * b1 - b2 + c[j], b1
    return x * b1 - b2 + c[0]


def evaluate_many(poly: ChebyshevMatrixPoly, zs) -> np.ndarray:
    """Batch evaluation via a tau-value table and one contraction."""
    x = np.atleast_1d(poly.map_argument(zs))
    d = poly.degree
    taus = np.empty((x.size, d + 1), dtype=np.complex128)
    taus[:, 0] = 1.0
    if d >= 1:
        taus[:, 1] = x
    for j in range(2, d + 1):
        taus[:, j] = 2.0 * x * taus[:, j - 1] - taus[:, j - 2]
    flat = poly.coefficients.reshape(d + 1, -1)
    return (taus @ flat).reshape(x.size, *poly.coefficients.shape[1:])


def derivative(poly: ChebyshevMatrixPoly) -> ChebyshevMatrixPoly:
    """Exact derivative series (coefficient recurrence plus the chain-rule
    factor of the interval map)."""
    scl = 2.0 / (poly.hi - poly.lo)
    if poly.degree == 0:
        coeffs = np.zeros_like(poly.coefficients)
    else:
        coeffs = np.polynomial.chebyshev.chebder(poly.coefficients, scl=scl, axis=0)
    return ChebyshevMatrixPoly(coefficients=coeffs, lo=poly.lo, hi=poly.hi)


def tail_ratio(poly: ChebyshevMatrixPoly) -> float:
    """||P_d|| / max_j ||P_j||; near-1 values flag an under-resolved degree."""
    norms = np.linalg.norm(poly.coefficients.reshape(poly.degree + 1, -1), axis=1)
    peak = norms.max()
    return float(norms[-1] / peak) if peak > 0 else 0.0
