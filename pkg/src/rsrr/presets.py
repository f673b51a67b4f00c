"""Benchmark presets: one command per reproduction run.

Each preset bundles a problem generator with the published solver
parameters (contour, probe width, node counts, Hankel blocks) so the
benchmark experiments are reproducible without hand-written configs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import EllipseContour, RectangleContour
from .driver import RsrrConfig
from .errors import ConfigError
from .problems import NepProblem, make_acoustic_1d, make_linear_pencil, make_loaded_string

LINEAR_ORACLE_SEED = 12
LINEAR_ORACLE_DIM = 50
LINEAR_ORACLE_INSIDE = 12


@dataclass(frozen=True)
class BenchCase:
    name: str
    description: str
    problem: NepProblem
    config: RsrrConfig
    expected_count: int | None = None


def linear_oracle_matrix(seed: int = LINEAR_ORACLE_SEED,
                         n: int = LINEAR_ORACLE_DIM) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def linear_oracle_circle(a: np.ndarray, inside: int = LINEAR_ORACLE_INSIDE):
    """Circle holding exactly ``inside`` eigenvalues of A, with the radius at
    the geometric mean of the bracketing center distances so both sides keep
    a healthy clearance from the contour."""
    eigenvalues = np.linalg.eigvals(a)
    center = complex(np.median(eigenvalues.real), np.median(eigenvalues.imag))
    r = np.sort(np.abs(eigenvalues - center))
    radius = float(np.sqrt(r[inside - 1] * r[inside]))
    return center, radius, eigenvalues


def acoustic_bench(n: int = 1000, zeta: complex = 1.0, probe_width: int = 2,
                   seed: int = 11) -> BenchCase:
    return BenchCase(
        name="acoustic1d",
        description=f"1-D acoustic FEM problem, n = {n}, 40 eigenvalues expected",
        problem=make_acoustic_1d(n, zeta),
        config=RsrrConfig(contour=EllipseContour(9.9 + 0.8j, 10.1, 1.01),
                          probe_width=probe_width, sample_count=100,
                          hankel_blocks=2, reduced_quadrature=1000, seed=seed),
        expected_count=40)


def string_bench(n: int = 5000, seed: int = 11) -> BenchCase:
    return BenchCase(
        name="string",
        description=f"loaded string, n = {n}, 32 eigenvalues in [3, 10000] expected",
        problem=make_loaded_string(n),
        config=RsrrConfig(contour=EllipseContour(5001.5 + 0j, 4998.5, 249.925),
                          probe_width=1, sample_count=100, hankel_blocks=8,
                          reduced_quadrature=1000, seed=seed),
        expected_count=32)


def gun_bench(data_dir: str, seed: int = 11) -> BenchCase:
    from .config import load_gun_problem
    problem = load_gun_problem(data_dir)
    contour = RectangleContour(140.0 + 0.0j, 335.4 + 50.0j, n_long=12, n_short=6)
    return BenchCase(
        name="gun",
        description="gun cavity, rectangle 140 .. 335.4+50i, '12-6' sampling, "
                    "22 eigenvalues expected",
        problem=problem,
        config=RsrrConfig(contour=contour, probe_width=4,
                          sample_count=contour.total_nodes, hankel_blocks=2,
                          reduced_quadrature=500, seed=seed),
        expected_count=22)


def linear_oracle_bench(seed: int = LINEAR_ORACLE_SEED) -> BenchCase:
    a = linear_oracle_matrix(seed)
    center, radius, _ = linear_oracle_circle(a)
    return BenchCase(
        name="linear-oracle",
        description=f"random {LINEAR_ORACLE_DIM}x{LINEAR_ORACLE_DIM} linear pencil, "
                    f"{LINEAR_ORACLE_INSIDE} eigenvalues in a centered circle",
        problem=make_linear_pencil(a),
        config=RsrrConfig(contour=EllipseContour(center, radius, radius),
                          probe_width=2, sample_count=32, hankel_blocks=2,
                          reduced_quadrature=256, seed=3),
        expected_count=LINEAR_ORACLE_INSIDE)


def get_bench(name: str, data_dir: str | None = None) -> BenchCase:
    if name == "acoustic1d":
        return acoustic_bench()
    if name == "string":
        return string_bench()
    if name == "gun":
        if data_dir is None:
            raise ConfigError("the gun benchmark needs --data-dir with the "
                              "coefficient matrices", field="bench.gun")
        return gun_bench(data_dir)
    if name == "linear-oracle":
        return linear_oracle_bench()
    raise ConfigError(f"unknown benchmark {name!r}; choose from acoustic1d, "
                      "string, gun, linear-oracle", field="bench")


BENCH_NAMES = ("acoustic1d", "string", "gun", "linear-oracle")
