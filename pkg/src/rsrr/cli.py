"""Command-line front end.

    rsrr solve <config.yaml>            run the sampling-scheme solver
    rsrr compare <config.yaml>          sampling vs moment scheme on one setup
    rsrr rank-experiment [...]          Vandermonde rank-vs-order table (CSV)
    rsrr bench <name>                   built-in benchmark presets

Exit codes: 0 success, 1 solver failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import sys

import numpy as np

from . import __version__
from .config import parse_run_config
from .driver import solve_rsrr, solve_ssrr
from .errors import ConfigError, RsrrError
from .linalg import numerical_rank
from .mmio import write_matrix_market
from .presets import BENCH_NAMES, get_bench
from .reporting import (build_compare_report, build_solve_report,
                        solution_to_dict, write_eigenvalue_csv, write_rank_csv,
                        write_report)
from .subspace import (build_moment_matrix, build_sampling_matrix, make_probe,
                       vandermonde_rank_experiment)
from .util import default_threads

logger = logging.getLogger("rsrr")

RANK_THRESHOLD = 1e-14


def _print_summary(solution):
    print(f"{solution.method}: {solution.count} eigenpair(s), "
          f"k_S = {solution.k_s}, eigencount strategy = "
          f"{solution.eigencount.strategy} "
          f"(winding {solution.eigencount.winding_raw:.4f}, "
          f"gap index {solution.eigencount.gap_index})")
    for lam, res in zip(solution.values, solution.residuals):
        print(f"  {lam.real:+.12e} {lam.imag:+.12e}j   residual {res:.3e}")
    if solution.flagged.size:
        print(f"  WARNING: {solution.flagged.size} pair(s) above the "
              "residual tolerance")


def _apply_threads(solver_config, threads):
    if threads is None:
        return solver_config
    return dataclasses.replace(solver_config, threads=max(1, threads))


def cmd_solve(args) -> int:
    run = parse_run_config(args.config)
    solver = _apply_threads(run.solver, args.threads)
    solution = solve_rsrr(run.problem, solver)
    _print_summary(solution)

    vector_ref = None
    if run.eigenvectors_path and solution.count:
        write_matrix_market(run.eigenvectors_path, solution.vectors)
        vector_ref = run.eigenvectors_path
        print(f"eigenvectors written to {run.eigenvectors_path}")
    if run.eigenvalues_csv:
        write_eigenvalue_csv(solution, run.eigenvalues_csv)
        print(f"eigenvalue table written to {run.eigenvalues_csv}")
    if run.report_path:
        report = build_solve_report(solution, run.raw, vector_ref=vector_ref)
        write_report(report, run.report_path)
        print(f"report written to {run.report_path}")
    return 0


def _parse_kprime_list(spec, default):
    if spec is None:
        return [default]
    out = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if ":" in part:
                lo, hi = part.split(":", 1)
                out.extend(range(int(lo), int(hi) + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse K' list {spec!r}",
                          field="--kprime") from None
    if not out or any(k < 1 for k in out):
        raise ConfigError("K' list must contain positive integers",
                          field="--kprime")
    return out


def cmd_compare(args) -> int:
    run = parse_run_config(args.config)
    solver = _apply_threads(run.solver, args.threads)
    kprimes = _parse_kprime_list(args.kprime, solver.sample_count)

    rsrr_solution = solve_rsrr(run.problem, solver)
    print("== sampling scheme ==")
    _print_summary(rsrr_solution)

    quad = solver.contour.quadrature(solver.sample_count)
    probe = make_probe(run.problem.dimension, solver.probe_width, solver.seed)
    sampling = build_sampling_matrix(run.problem, quad.nodes, probe,
                                     retry_scale=1e-8 * solver.contour.rho,
                                     threads=solver.threads)
    rank_sampling = numerical_rank(
        np.linalg.svd(sampling, compute_uv=False), RANK_THRESHOLD)

    ssrr_runs = []
    for k_prime in kprimes:
        moments = build_moment_matrix(run.problem, quad, probe, k_prime,
                                      basis=args.moment_basis,
                                      gamma=solver.contour.gamma,
                                      rho=solver.contour.rho,
                                      retry_scale=1e-8 * solver.contour.rho,
                                      threads=solver.threads)
        rank_moment = numerical_rank(
            np.linalg.svd(moments, compute_uv=False), RANK_THRESHOLD)
        try:
            sol = solve_ssrr(run.problem, solver, k_prime=k_prime,
                             moment_basis=args.moment_basis)
        except RsrrError as exc:
            # a moment-scheme breakdown is a comparison result, not a crash
            print(f"== moment scheme, K' = {k_prime}: FAILED ({exc}); "
                  f"rank {rank_moment} (sampling rank {rank_sampling})")
            ssrr_runs.append((k_prime, args.moment_basis, None, rank_moment,
                              str(exc)))
            continue
        med = np.median(sol.residuals) if sol.count else float("nan")
        print(f"== moment scheme, K' = {k_prime}: {sol.count} pair(s), "
              f"median residual {med:.3e}, rank {rank_moment} "
              f"(sampling rank {rank_sampling})")
        ssrr_runs.append((k_prime, args.moment_basis, sol, rank_moment, None))

    report = build_compare_report(rsrr_solution, ssrr_runs, run.raw,
                                  rank_sampling, RANK_THRESHOLD)
    if not report["rank_dominance_ok"]:
        logger.warning("moment-matrix rank exceeded sampling-matrix rank; "
                       "this contradicts the range inclusion")
    if run.report_path:
        write_report(report, run.report_path)
        print(f"comparison report written to {run.report_path}")
    return 0


def cmd_rank_experiment(args) -> int:
    eigs = np.linspace(args.eigs_lo, args.eigs_hi, args.count)
    table = vandermonde_rank_experiment(eigs, args.kmax, args.tol,
                                        basis=args.basis)
    if args.out:
        write_rank_csv(table, args.out)
        print(f"rank table written to {args.out}")
    else:
        print("K_prime,rank")
        for k_prime, rank in table:
            print(f"{k_prime},{rank}")
    return 0


def cmd_bench(args) -> int:
    case = get_bench(args.name, data_dir=args.data_dir)
    solver = _apply_threads(case.config, args.threads)
    print(f"benchmark {case.name}: {case.description}")
    solution = solve_rsrr(case.problem, solver)
    _print_summary(solution)
    if case.expected_count is not None:
        status = "OK" if solution.count == case.expected_count else "MISMATCH"
        print(f"expected {case.expected_count} eigenpair(s): {status}")
    if args.report:
        echo = {"bench": case.name, "description": case.description}
        write_report(build_solve_report(solution, echo), args.report)
        print(f"report written to {args.report}")
    if case.expected_count is not None and solution.count != case.expected_count:
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsrr",
        description="Contour-integral eigensolver for nonlinear eigenvalue "
                    "problems (resolvent sampling + Rayleigh-Ritz).")
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true",
                        help="log solver diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the solver on a config file")
    p_solve.add_argument("config")
    p_solve.add_argument("--threads", type=int, default=None,
                         help=f"parallel map width (default {default_threads()})")
    p_solve.set_defaults(func=cmd_solve)

    p_cmp = sub.add_parser("compare",
                           help="sampling vs moment scheme on one config")
    p_cmp.add_argument("config")
    p_cmp.add_argument("--kprime", default=None,
                       help="moment orders, e.g. '10:32' or '8,16,32' "
                            "(default: the sampling count)")
    p_cmp.add_argument("--moment-basis", choices=("monomial", "chebyshev"),
                       default="monomial")
    p_cmp.add_argument("--threads", type=int, default=None)
    p_cmp.set_defaults(func=cmd_compare)

    p_rank = sub.add_parser("rank-experiment",
                            help="numerical rank of the eigenvalue "
                                 "Vandermonde matrix vs moment order")
    p_rank.add_argument("--eigs-lo", type=float, default=-0.9)
    p_rank.add_argument("--eigs-hi", type=float, default=0.9)
    p_rank.add_argument("--count", type=int, default=50)
    p_rank.add_argument("--tol", type=float, default=1e-12)
    p_rank.add_argument("--kmax", type=int, default=200)
    p_rank.add_argument("--basis", choices=("monomial", "chebyshev"),
                        default="monomial")
    p_rank.add_argument("--out", default=None, help="CSV output path")
    p_rank.set_defaults(func=cmd_rank_experiment)

    p_bench = sub.add_parser("bench", help="run a built-in benchmark preset")
    p_bench.add_argument("name", choices=BENCH_NAMES)
    p_bench.add_argument("--data-dir", default=None,
                         help="directory with K.mtx/M.mtx/W1.mtx/W2.mtx "
                              "(gun benchmark)")
    p_bench.add_argument("--report", default=None, help="JSON report path")
    p_bench.add_argument("--threads", type=int, default=None)
    p_bench.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except RsrrError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
