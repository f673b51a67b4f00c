"""Closed contours in the complex plane and their quadrature rules.

Weight convention: every QuadratureSet satisfies

    sum_j w_j * f(z_j)  ~=  (1 / 2*pi*i) * integral_C f(z) dz

so a Cauchy integral of 1/(z - lambda) sums to 1 for lambda inside the
contour and 0 outside. Downstream code treats ellipses and rectangles
uniformly through this convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter


@dataclass(frozen=True)
class QuadratureSet:
    """Nodes and complex weights of a contour rule (see module convention)."""

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise InvalidParameter("nodes and weights must be equal-length 1-D arrays")
        if self.nodes.size < 1:
            raise InvalidParameter("a quadrature set needs at least one node")

    @property
    def count(self) -> int:
        return self.nodes.size


def ellipse_trapezoid(gamma: complex, a: float, b: float, n: int) -> QuadratureSet:
    """Midpoint-shifted trapezoid rule on the ellipse gamma + a*cos + i*b*sin.

    The half-step shift of the angles keeps nodes off the real axis where
    real eigenvalues tend to sit.
    """
    if a <= 0 or b <= 0:
        raise InvalidParameter("ellipse semi-axes must be positive")
    if n < 2:
        raise InvalidParameter("trapezoid rule needs at least 2 nodes")
    theta = 2.0 * np.pi * (np.arange(n) + 0.5) / n
    nodes = gamma + a * np.cos(theta) + 1j * b * np.sin(theta)
    dphi = -a * np.sin(theta) + 1j * b * np.cos(theta)
    weights = dphi / (1j * n)
    return QuadratureSet(nodes=nodes, weights=weights)


def rectangle_gauss(lower_left: complex, upper_right: complex,
                    n_long: int, n_short: int) -> QuadratureSet:
    """Per-side Gauss-Legendre rule on an axis-aligned rectangle.

    The longer pair of sides receives ``n_long`` points each and the shorter
    pair ``n_short``. Nodes run counterclockwise; each weight carries the
    side's complex direction so the module-level convention holds.
    """
    width = upper_right.real - lower_left.real
    height = upper_right.imag - lower_left.imag
    if width <= 0 or height <= 0:
        raise InvalidParameter("rectangle must have positive width and height")
    if n_long < 1 or n_short < 1:
        raise InvalidParameter("per-side node counts must be >= 1")

    ll = complex(lower_left)
    lr = complex(upper_right.real, lower_left.imag)
    ur = complex(upper_right)
    ul = complex(lower_left.real, upper_right.imag)
    horiz_n, vert_n = (n_long, n_short) if width >= height else (n_short, n_long)
    sides = [(ll, lr, horiz_n), (lr, ur, vert_n), (ur, ul, horiz_n), (ul, ll, vert_n)]

    nodes, weights = [], []
    for start, end, m in sides:
        t, gw = np.polynomial.legendre.leggauss(m)
        mid = 0.5 * (start + end)
        half = 0.5 * (end - start)
        nodes.append(mid + t * half)
        weights.append(gw * half / (2j * np.pi))
    return QuadratureSet(nodes=np.concatenate(nodes), weights=np.concatenate(weights))


def scaled_basis_value(z: complex, gamma: complex, rho: float, alpha: int):
    """Shifted-scaled monomial ((z - gamma) / rho) ** alpha."""
    if rho <= 0:
        raise InvalidParameter("scale rho must be positive")
    if alpha < 0:
        raise InvalidParameter("basis order alpha must be >= 0")
    return ((z - gamma) / rho) ** alpha


class Contour:
    """Common interface of the closed contours: shift/scale parameters,
    quadrature generation, and a point-inside test."""

    @property
    def gamma(self) -> complex:
        raise NotImplementedError

    @property
    def rho(self) -> float:
        raise NotImplementedError

    def quadrature(self, n: int) -> QuadratureSet:
        raise NotImplementedError

    def contains(self, z, margin: float = 0.0):
        raise NotImplementedError

    def real_interval(self) -> tuple[float, float]:
        """Real-axis bounding interval, used by the Chebyshev reduction."""
        raise NotImplementedError


@dataclass(frozen=True)
class EllipseContour(Contour):
    center: complex
    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise InvalidParameter("ellipse semi-axes must be positive")

    @property
    def gamma(self) -> complex:
        return self.center

    @property
    def rho(self) -> float:
        return max(self.a, self.b)

    def quadrature(self, n: int) -> QuadratureSet:
        return ellipse_trapezoid(self.center, self.a, self.b, n)

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z)
        a = self.a - margin
        b = self.b - margin
        if a <= 0 or b <= 0:
            return np.zeros(z.shape, dtype=bool) if z.ndim else False
        r2 = ((z.real - self.center.real) / a) ** 2 \
            + ((z.imag - self.center.imag) / b) ** 2
        return r2 < 1.0

    def real_interval(self) -> tuple[float, float]:
        return (self.center.real - self.a, self.center.real + self.a)


@dataclass(frozen=True)
class RectangleContour(Contour):
    lower_left: complex
    upper_right: complex
    n_long: int = 10
    n_short: int = 5

    def __post_init__(self):
        if (self.upper_right.real <= self.lower_left.real
                or self.upper_right.imag <= self.lower_left.imag):
            raise InvalidParameter("rectangle must have positive width and height")
        if self.n_long < 1 or self.n_short < 1:
            raise InvalidParameter("per-side node counts must be >= 1")

    @property
    def gamma(self) -> complex:
        return 0.5 * (self.lower_left + self.upper_right)

    @property
    def rho(self) -> float:
        return 0.5 * max(self.upper_right.real - self.lower_left.real,
                         self.upper_right.imag - self.lower_left.imag)

    @property
    def total_nodes(self) -> int:
        return 2 * (self.n_long + self.n_short)

    def quadrature(self, n: int) -> QuadratureSet:
        """Rule with ~n total nodes, preserving the long/short side ratio."""
        if n == self.total_nodes:
            nl, ns = self.n_long, self.n_short
        else:
            factor = n / self.total_nodes
            nl = max(1, round(self.n_long * factor))
            ns = max(1, round(self.n_short * factor))
        return rectangle_gauss(self.lower_left, self.upper_right, nl, ns)

    def contains(self, z, margin: float = 0.0):
        z = np.asarray(z)
        return ((z.real > self.lower_left.real + margin)
                & (z.real < self.upper_right.real - margin)
                & (z.imag > self.lower_left.imag + margin)
                & (z.imag < self.upper_right.imag - margin))

    def real_interval(self) -> tuple[float, float]:
        return (self.lower_left.real, self.upper_right.real)
