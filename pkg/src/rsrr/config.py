"""Run configuration: YAML parsing, strict validation, problem construction.

The file has four blocks: ``problem`` (a builtin generator or a sum-form
assembly from Matrix Market files), ``contour``, ``rsrr`` (solver knobs) and
``output`` (artifact paths). Unknown keys anywhere are rejected, and every
error names the offending field path.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import yaml

from .contour import Contour, EllipseContour, RectangleContour
from .driver import RsrrConfig
from .errors import ConfigError, InvalidParameter, RsrrError
from .mmio import load_matrix_market
from .problems import (ChebyshevBasis, Constant, Monomial, NepProblem,
                       RationalPole, SqrtBranch, SumFormNep,
                       make_acoustic_1d, make_gun_form, make_loaded_string)

_TOP_KEYS = {"problem", "contour", "rsrr", "output"}
_RSRR_KEYS = {"probe_width", "sample_count", "delta", "hankel_blocks",
              "reduced_quadrature", "tol_gap", "residual_tol", "seed",
              "reduction", "chebyshev_degree"}
_OUTPUT_KEYS = {"report", "eigenvalues_csv", "eigenvectors"}


@dataclass
class RunConfig:
    problem: NepProblem
    contour: Contour
    solver: RsrrConfig
    raw: dict
    report_path: str | None = None
    eigenvalues_csv: str | None = None
    eigenvectors_path: str | None = None
    base_dir: str = "."


def _require(mapping, key, path, kind=None):
    if key not in mapping:
        raise ConfigError("missing required key", field=f"{path}.{key}")
    value = mapping[key]
    if kind is not None and not isinstance(value, kind):
        raise ConfigError(f"expected {kind.__name__ if not isinstance(kind, tuple) else 'number'}, "
                          f"got {type(value).__name__}", field=f"{path}.{key}")
    return value


def _reject_unknown(mapping, allowed, path):
    if not isinstance(mapping, dict):
        raise ConfigError("expected a mapping", field=path)
    unknown = set(mapping) - set(allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)}", field=path)


def _as_complex(value, path) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if (isinstance(value, (list, tuple)) and len(value) == 2
            and all(isinstance(v, (int, float)) for v in value)):
        return complex(value[0], value[1])
    raise ConfigError("expected a number or [re, im] pair", field=path)


def _as_positive(value, path) -> float:
    if not isinstance(value, (int, float)) or value <= 0:
        raise ConfigError("expected a positive number", field=path)
    return float(value)


def parse_contour(block, path="contour") -> Contour:
    shape = _require(block, "shape", path, str)
    if shape == "ellipse":
        _reject_unknown(block, {"shape", "center", "a", "b"}, path)
        center = _as_complex(_require(block, "center", path), f"{path}.center")
        a = _as_positive(_require(block, "a", path), f"{path}.a")
        b = _as_positive(_require(block, "b", path), f"{path}.b")
        return EllipseContour(center, a, b)
    if shape == "rectangle":
        allowed = {"shape", "lower_left", "upper_right", "n_long", "n_short"}
        _reject_unknown(block, allowed, path)
        ll = _as_complex(_require(block, "lower_left", path), f"{path}.lower_left")
        ur = _as_complex(_require(block, "upper_right", path), f"{path}.upper_right")
        n_long = int(_as_positive(block.get("n_long", 10), f"{path}.n_long"))
        n_short = int(_as_positive(block.get("n_short", 5), f"{path}.n_short"))
        try:
            return RectangleContour(ll, ur, n_long=n_long, n_short=n_short)
        except InvalidParameter as exc:
            raise ConfigError(str(exc), field=path) from exc
    raise ConfigError(f"unknown shape {shape!r}", field=f"{path}.shape")


_FUNCTION_KEYS = {
    "monomial": {"type", "power"},
    "constant": {"type", "value"},
    "rational": {"type", "a", "b"},
    "sqrt_branch": {"type", "sigma"},
    "chebyshev": {"type", "order", "lo", "hi"},
}


def parse_scalar_function(block, path):
    kind = _require(block, "type", path, str)
    if kind not in _FUNCTION_KEYS:
        raise ConfigError(f"unknown function type {kind!r}", field=f"{path}.type")
    _reject_unknown(block, _FUNCTION_KEYS[kind], path)
    if kind == "monomial":
        return Monomial(int(_require(block, "power", path, int)))
    if kind == "constant":
        return Constant(_as_complex(_require(block, "value", path), f"{path}.value"))
    if kind == "rational":
        return RationalPole(_as_complex(_require(block, "a", path), f"{path}.a"),
                            _as_complex(_require(block, "b", path), f"{path}.b"))
    if kind == "sqrt_branch":
        sigma = _require(block, "sigma", path, (int, float))
        return SqrtBranch(float(sigma))
    return ChebyshevBasis(int(_require(block, "order", path, int)),
                          float(_require(block, "lo", path, (int, float))),
                          float(_require(block, "hi", path, (int, float))))


def _build_sum_form(block, path, base_dir):
    _reject_unknown(block, {"terms"}, path)
    terms_spec = _require(block, "terms", path, list)
    if not terms_spec:
        raise ConfigError("needs at least one term", field=f"{path}.terms")
    terms = []
    for idx, term in enumerate(terms_spec):
        tpath = f"{path}.terms[{idx}]"
        _reject_unknown(term, {"matrix", "scale", "function"}, tpath)
        mpath = _require(term, "matrix", tpath, str)
        full = mpath if os.path.isabs(mpath) else os.path.join(base_dir, mpath)
        if not os.path.exists(full):
            raise ConfigError(f"matrix file not found: {full}", field=f"{tpath}.matrix")
        matrix = load_matrix_market(full)
        if "scale" in term:
            matrix = matrix * _as_complex(term["scale"], f"{tpath}.scale")
        func = parse_scalar_function(_require(term, "function", tpath, dict),
                                     f"{tpath}.function")
        terms.append((matrix, func))
    try:
        return SumFormNep(terms)
    except RsrrError as exc:
        raise ConfigError(str(exc), field=path) from exc


def parse_problem(block, path="problem", base_dir=".") -> NepProblem:
    if not isinstance(block, dict):
        raise ConfigError("expected a mapping", field=path)
    if "builtin" in block:
        name = block["builtin"]
        if name == "acoustic1d":
            _reject_unknown(block, {"builtin", "n", "zeta"}, path)
            n = int(_require(block, "n", path, int))
            zeta = _as_complex(block.get("zeta", 1.0), f"{path}.zeta")
            try:
                return make_acoustic_1d(n, zeta)
            except RsrrError as exc:
                raise ConfigError(str(exc), field=path) from exc
        if name == "string":
            _reject_unknown(block, {"builtin", "n"}, path)
            try:
                return make_loaded_string(int(_require(block, "n", path, int)))
            except RsrrError as exc:
                raise ConfigError(str(exc), field=path) from exc
        if name == "gun":
            _reject_unknown(block, {"builtin", "data_dir", "sigma1", "sigma2"}, path)
            data_dir = _require(block, "data_dir", path, str)
            if not os.path.isabs(data_dir):
                data_dir = os.path.join(base_dir, data_dir)
            return load_gun_problem(data_dir,
                                    float(block.get("sigma1", 0.0)),
                                    float(block.get("sigma2", 108.8774)))
        raise ConfigError(f"unknown builtin {name!r}", field=f"{path}.builtin")
    if "sum_form" in block:
        _reject_unknown(block, {"sum_form"}, path)
        return _build_sum_form(block["sum_form"], f"{path}.sum_form", base_dir)
    raise ConfigError("needs either 'builtin' or 'sum_form'", field=path)


GUN_FILES = ("K.mtx", "M.mtx", "W1.mtx", "W2.mtx")


def load_gun_problem(data_dir, sigma1=0.0, sigma2=108.8774) -> SumFormNep:
    """Gun cavity problem from user-supplied Matrix Market coefficient files
    named K.mtx, M.mtx, W1.mtx, W2.mtx."""
    paths = [os.path.join(data_dir, name) for name in GUN_FILES]
    missing = [p for p in paths if not os.path.exists(p)]
    if missing:
        raise ConfigError(f"gun data files missing: {missing}", field="problem.data_dir")
    import scipy.sparse as sp
    mats = [sp.csr_matrix(load_matrix_market(p)) for p in paths]
    return make_gun_form(*mats, sigma1=sigma1, sigma2=sigma2)


def parse_run_config(path) -> RunConfig:
    """Load and validate a YAML run configuration file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}", field="<file>") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML: {exc}", field="<file>") from None
    if not isinstance(raw, dict):
        raise ConfigError("top level must be a mapping", field="<file>")
    _reject_unknown(raw, _TOP_KEYS, "<top>")
    base_dir = os.path.dirname(os.path.abspath(path))

    problem = parse_problem(_require(raw, "problem", "<top>", dict),
                            base_dir=base_dir)
    contour = parse_contour(_require(raw, "contour", "<top>", dict))

    rsrr_block = dict(_require(raw, "rsrr", "<top>", dict))
    _reject_unknown(rsrr_block, _RSRR_KEYS, "rsrr")
    try:
        solver = RsrrConfig(contour=contour, **rsrr_block)
    except (InvalidParameter, TypeError) as exc:
        raise ConfigError(str(exc), field="rsrr") from exc

    out = raw.get("output", {})
    _reject_unknown(out, _OUTPUT_KEYS, "output")

    def out_path(key):
        value = out.get(key)
        if value is None:
            return None
        if not isinstance(value, str):
            raise ConfigError("expected a path string", field=f"output.{key}")
        return value if os.path.isabs(value) else os.path.join(base_dir, value)

    return RunConfig(problem=problem, contour=contour, solver=solver, raw=raw,
                     report_path=out_path("report"),
                     eigenvalues_csv=out_path("eigenvalues_csv"),
                     eigenvectors_path=out_path("eigenvectors"),
                     base_dir=base_dir)


def serialize_config(raw: dict) -> str:
    """YAML round-trip serialization (parse -> serialize -> parse identity)."""
    return yaml.safe_dump(raw, sort_keys=True)
