"""Machine-readable run reports (JSON, schema-validated) and CSV exports."""

from __future__ import annotations

import csv
import json
import os
from importlib import resources

import numpy as np

from . import __version__
from .driver import EigenSolution

SCHEMA_VERSION = 1


def _eigencount_dict(report) -> dict:
    return {
        "winding_raw": report.winding_raw,
        "winding": report.winding,
        "gap_index": report.gap_index,
        "gap_ratio": float(report.gap_ratio) if np.isfinite(report.gap_ratio) else None,
        "tol_gap": report.tol_gap,
        "chosen": report.chosen,
        "strategy": report.strategy,
    }


def solution_to_dict(solution: EigenSolution, vector_ref: str | None = None) -> dict:
    flagged = set(solution.flagged.tolist())
    pairs = [{
        "re": float(lam.real),
        "im": float(lam.imag),
        "residual": float(res),
        "flagged": j in flagged,
    } for j, (lam, res) in enumerate(zip(solution.values, solution.residuals))]
    out = {
        "method": solution.method,
        "reduction_mode": solution.reduction_mode,
        "eigenpairs": pairs,
        "eigencount": _eigencount_dict(solution.eigencount),
        "basis": {
            "k_s": solution.k_s,
            "singular_values": [float(s) for s in solution.basis_singular_values],
        },
        "discarded": [[float(v.real), float(v.imag)] for v in solution.discarded],
        "timings": {k: float(v) for k, v in solution.timings.items()},
    }
    if vector_ref is not None:
        out["eigenvector_file"] = vector_ref
    return out


def build_solve_report(solution: EigenSolution, config_echo: dict,
                       vector_ref: str | None = None) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "solve",
        "generator": {"package": "rsrr", "version": __version__},
        "config": config_echo,
        "run": solution_to_dict(solution, vector_ref=vector_ref),
    }


def build_compare_report(rsrr_solution: EigenSolution, ssrr_runs: list,
                         config_echo: dict, rank_sampling: int,
                         rank_threshold: float) -> dict:
    """``ssrr_runs`` holds (k_prime, basis, solution_or_None, rank_moment,
    error_or_None) tuples; a failed moment-scheme run is itself a result."""
    runs = []
    dominance = True
    for k_prime, basis_name, sol, rank_moment, error in ssrr_runs:
        dominance = dominance and (rank_sampling >= rank_moment)
        row = {
            "k_prime": k_prime,
            "moment_basis": basis_name,
            "rank_moment": rank_moment,
            "median_residual": None,
            "run": None,
        }
        if sol is not None:
            row["run"] = solution_to_dict(sol)
            if sol.count:
                row["median_residual"] = float(np.median(sol.residuals))
        if error is not None:
            row["error"] = error
        runs.append(row)
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "compare",
        "generator": {"package": "rsrr", "version": __version__},
        "config": config_echo,
        "rank_threshold": rank_threshold,
        "rank_sampling": rank_sampling,
        "rank_dominance_ok": dominance,
        "rsrr": solution_to_dict(rsrr_solution),
        "rsrr_median_residual": float(np.median(rsrr_solution.residuals))
            if rsrr_solution.count else None,
        "ssrr_runs": runs,
    }


def load_schema(kind: str) -> dict:
    name = f"{kind}_report_v{SCHEMA_VERSION}.json"
    with resources.files("rsrr.schemas").joinpath(name).open("r") as fh:
        return json.load(fh)


def validate_report(report: dict) -> None:
    import jsonschema
    jsonschema.validate(report, load_schema(report["kind"]))


def write_report(report: dict, path: str) -> None:
    validate_report(report)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_eigenvalue_csv(solution: EigenSolution, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["re", "im", "residual"])
        for lam, res in zip(solution.values, solution.residuals):
            writer.writerow([f"{lam.real:.17g}", f"{lam.imag:.17g}", f"{res:.17g}"])


def write_rank_csv(table, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["K_prime", "rank"])
        for k_prime, rank in table:
            writer.writerow([k_prime, rank])
