"""Command-line entry point.

Every subcommand reads a JSON config (``--config``), writes its outputs into
``--out`` and prints the main JSON result on stdout.  The effective config
and the library version are echoed into every file: as a field in JSON and
as ``#`` comment lines in CSV.

Exit codes: 0 success, 2 validation error, 3 numerical failure.  Failures
print a single JSON object ``{"error": name, "message": ...}`` on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional

import numpy as np

from . import __version__
from .errors import HardyError, ZeroPolynomial
from .kernels import adaptive_truncation, check_point, kernel_derivative_series, on_boundary
from .series import (
    TruncatedSeries,
    blaschke_factor,
    config_comment,
    evaluate,
    is_inner,
    read_coefficients_csv,
    write_coefficients_csv,
)
from .shapiro_shields import ZeroSet, regularity_check, shapiro_shields, verify_vanishing
from .theorem_lab import (
    classify_polynomial_inner,
    project_onto_shift_span,
    projection_error_curve,
    search_inner_polynomials,
)
from .weights import WeightSequence, space_diagnostics

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 2, 3


class ConfigError(ValueError):
    pass


def parse_complex(value, name: str = "value") -> complex:
    """Accept ``x``, ``[re, im]`` or ``{"re": .., "im": ..}``."""
    if isinstance(value, bool):
        raise ConfigError(f"{name}: expected a number")
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, dict) and "re" in value:
        return complex(float(value["re"]), float(value.get("im", 0.0)))
    raise ConfigError(f"{name}: cannot read {value!r} as a complex number")


def _space(config: dict) -> WeightSequence:
    if "space" not in config:
        raise ConfigError("config needs a 'space' descriptor")
    return WeightSequence.from_descriptor(config["space"])


def _zeros(config: dict) -> ZeroSet:
    items = config.get("zeros")
    if not isinstance(items, list):
        raise ConfigError("config needs a 'zeros' list")
    entries = []
    for i, d in enumerate(items):
        if isinstance(d, dict) and "z" in d:
            z = parse_complex(d["z"], f"zeros[{i}]")
            m = d.get("mult", 1)
        elif isinstance(d, dict):
            z = parse_complex(d, f"zeros[{i}]")
            m = d.get("mult", 1)
        else:
            z, m = parse_complex(d, f"zeros[{i}]"), 1
        if int(m) != m or m < 1:
            raise ConfigError(f"zeros[{i}]: multiplicity must be a positive integer")
        entries.append((z, int(m)))
    return ZeroSet(tuple(entries))


def _series_from(config: dict, base: str) -> TruncatedSeries:
    """Coefficients from ``coefficients`` (CSV path, relative to the config)
    or ``blaschke`` (``{"zero": a, "degree": N}``)."""
    if "coefficients" in config:
        path = config["coefficients"]
        if not os.path.isabs(path):
            path = os.path.join(base, path)
        return read_coefficients_csv(path)
    if "blaschke" in config:
        b = config["blaschke"]
        return blaschke_factor(parse_complex(b["zero"], "blaschke.zero"), int(b["degree"]))
    raise ConfigError("config needs 'coefficients' (CSV path) or 'blaschke'")


class Emitter:
    def __init__(self, out_dir: str, config: dict):
        self.out_dir = out_dir
        self.config = config
        os.makedirs(out_dir, exist_ok=True)

    def _comments(self):
        return [config_comment(self.config), f"version: {__version__}"]

    def json(self, name: str, payload: dict) -> dict:
        payload = dict(payload)
        payload["config"] = self.config
        payload["version"] = __version__
        with open(os.path.join(self.out_dir, name), "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=_jsonable)
            fh.write("\n")
        return payload

    def coefficients(self, name: str, f: TruncatedSeries):
        write_coefficients_csv(os.path.join(self.out_dir, name), f, self._comments())

    def table(self, name: str, header, rows):
        with open(os.path.join(self.out_dir, name), "w", newline="") as fh:
            for line in self._comments():
                fh.write(f"# {line}\n")
            writer = csv.writer(fh)
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(x) for x in row])


def _fmt(x):
    if isinstance(x, (float, np.floating)):
        return "%.17g" % x
    return x


def _jsonable(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- subcommands ---------------------------------------------------------------


def cmd_space_report(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    diag = space_diagnostics(
        w,
        window=int(config.get("window", 10**4)),
        sum_window=int(config.get("sum_window", 10**6)),
        algebra_window=int(config.get("algebra_window", 1000)),
    )
    return em.json("space_report.json", diag.to_dict())


def cmd_kernel(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    a = parse_complex(config.get("a", 0.0), "a")
    m = int(config.get("order", 0))
    tol = float(config.get("tol", 1e-14))
    check_point(w, a, m)
    N = config.get("N")
    if N is None:
        N = adaptive_truncation(w, 1.0 if on_boundary(a) else abs(a), tol) + 8 * m
    k = kernel_derivative_series(w, a, m, int(N))
    em.coefficients("kernel_coefficients.csv", k)
    radii = config.get("radii")
    if radii is None:
        radii = np.linspace(0.0, 0.95, int(config.get("samples", 20))).tolist()
    direction = a / abs(a) if a != 0 else 1.0
    vals = evaluate(k, np.asarray(radii, dtype=float) * direction)
    em.table("kernel_radial.csv", ["r", "re", "im", "abs"],
             [(float(r), v.real, v.imag, abs(v)) for r, v in zip(radii, vals)])
    return em.json("kernel.json", {"N": int(N), "order": m, "a": [a.real, a.imag],
                                   "radial_abs": [abs(v) for v in vals]})


def cmd_shapiro_shields(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    Z = _zeros(config)
    N = config.get("N")
    res = shapiro_shields(w, Z, None if N is None else int(N), config.get("route", "determinant"))
    em.coefficients("shapiro_shields.csv", res.h)
    inner = is_inner(res.h, w, int(config.get("kmax", 20)), float(config.get("tol", 1e-8)))
    vanish = verify_vanishing(res, Z, float(config.get("vanish_tol", 1e-8)))
    regularity = []
    for z, _ in Z.entries:
        if z == 0:
            continue
        regularity.append(regularity_check(res, Z, z).to_dict())
    for extra in config.get("check_points", []):
        regularity.append(regularity_check(res, Z, parse_complex(extra, "check_points")).to_dict())
    out = res.to_dict()
    out.update(zeros=Z.to_json(), inner=inner.to_dict(), vanishing=[v.to_dict() for v in vanish],
               regularity=regularity)
    return em.json("shapiro_shields.json", out)


def cmd_inner_check(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    f = _series_from(config, base)
    report = is_inner(f, w, int(config.get("kmax", 20)), float(config.get("tol", 1e-8)))
    out = report.to_dict()
    out["verdict"] = "inner" if report.inner else "not_inner"
    return em.json("inner_check.json", out)


def cmd_local_order(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    z0 = parse_complex(config.get("z0"), "z0")
    kw = {k: config[k] for k in ("r_min", "r_max", "samples", "directions") if k in config}
    if "zeros" in config:
        Z = _zeros(config)
        N = config.get("N")
        res = shapiro_shields(w, Z, None if N is None else int(N), config.get("route", "determinant"))
        verdict = regularity_check(res, Z, z0, float(config.get("tol_exponent", 0.1)), **kw)
        out = verdict.to_dict()
        out["estimate"] = verdict.estimate.to_dict()
    else:
        from .shapiro_shields import local_order_estimate

        est = local_order_estimate(_series_from(config, base), z0, **kw)
        out = {"estimate": est.to_dict(), "estimated_order": est.exponent}
    return em.json("local_order.json", out)


def cmd_search_inner(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    outcome = search_inner_polynomials(
        w,
        int(config.get("N", 3)),
        trials=int(config.get("trials", 100)),
        seed=int(config.get("seed", 0)),
        max_iter=int(config.get("max_iter", 500)),
        threshold=float(config.get("threshold", 1e-10)),
    )
    return em.json("search_inner.json", outcome.to_dict())


def cmd_classify(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    f = _series_from(config, base)
    verdict = classify_polynomial_inner(f, w, float(config.get("tol", 1e-8)))
    return em.json("classify.json", verdict.to_dict())


def cmd_project_one(config: dict, em: Emitter, base: str) -> dict:
    w = _space(config)
    g = _series_from(config, base)
    Ms = [int(M) for M in config.get("Ms", [5, 10, 20, 50])]
    curve = projection_error_curve(w, g, Ms)
    em.table("project_one_error.csv", ["M", "error"], curve)
    em.coefficients("project_one.csv", project_onto_shift_span(w, g, max(Ms)))
    return em.json("project_one.json", {"Ms": Ms, "errors": [e for _, e in curve]})


COMMANDS = {
    "space-report": cmd_space_report,
    "kernel": cmd_kernel,
    "shapiro-shields": cmd_shapiro_shields,
    "inner-check": cmd_inner_check,
    "local-order": cmd_local_order,
    "search-inner": cmd_search_inner,
    "classify": cmd_classify,
    "project-one": cmd_project_one,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardyinner", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="JSON run configuration")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    return parser


def _fail(code: int, exc: BaseException) -> int:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("condition", "epsilon"):
        if getattr(exc, attr, None) is not None:
            payload[attr] = getattr(exc, attr)
    sys.stderr.write(json.dumps(payload) + "\n")
    return code


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_VALIDATION
    try:
        with open(args.config) as fh:
            config = json.load(fh)
        if not isinstance(config, dict):
            raise ConfigError("config must be a JSON object")
        if args.seed is not None:
            config["seed"] = args.seed
        em = Emitter(args.out, config)
        result = COMMANDS[args.command](config, em, os.path.dirname(os.path.abspath(args.config)))
    except ZeroPolynomial as exc:
        return _fail(EXIT_VALIDATION, exc)
    except HardyError as exc:
        # BoundaryNotAdmissible is also a ValueError but counts as numerical
        return _fail(EXIT_NUMERICAL, exc)
    except (ValueError, KeyError, TypeError, OSError) as exc:
        return _fail(EXIT_VALIDATION, exc)
    json.dump(result, sys.stdout, sort_keys=True, default=_jsonable)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
