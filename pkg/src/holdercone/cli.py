"""Command-line front end: analyze, decay, certify, suite.

Exit codes: 0 success, 1 usage or input error, 2 infinite-seminorm result
(or failed certification), 3 verification-suite failures.  All numeric
output is rendered round-trip exact, so re-running a command on the same
inputs rewrites byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import jsonio
from .errors import DegenerateFit, HolderConeError
from .function_model import (
    GridFunction,
    evaluate_array,
    sample,
    spec_from_json,
    spec_to_json,
    strict_floor,
)
from .holder_analysis import (
    dyadic_points,
    flat_norm,
    flatness_seminorm,
    holder_seminorm,
    membership,
)
from .theorem_suite import SuiteConfig, default_config, run_suite, write_suite_outputs
from .wavelet_engine import (
    build_basis,
    decay_fit,
    decompose,
    export_decomposition_csv,
    level_sup,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFINITE = 2
EXIT_SUITE_FAIL = 3


def _load_function(arg: str):
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
    else:
        text = arg
    return spec_from_json(json.loads(text))


def _write(obj, path, fmt: str):
    if fmt == "json":
        jsonio.dump(obj, path)
    else:
        with open(path, "w", newline="") as fh:
            fh.write("key,value\n")
            for k, v in _flatten(obj):
                fh.write(f"{k},{v}\n")


def _flatten(obj, prefix=""):
    rows = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            rows.extend(_flatten(v, f"{prefix}{k}." if prefix else f"{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            rows.extend(_flatten(v, f"{prefix}{i}."))
    else:
        key = prefix.rstrip(".")
        if isinstance(obj, float):
            rows.append((key, jsonio.format_float(obj).strip('"')))
        else:
            rows.append((key, obj))
    return rows


def cmd_analyze(args) -> int:
    spec = _load_function(args.function)
    J = args.grid_level
    xs = dyadic_points(J)
    f0 = evaluate_array(spec, xs, 0)
    hol = holder_seminorm(spec, args.beta, J)
    flat = flatness_seminorm(spec, args.beta, J)
    sup0 = float(np.max(np.abs(f0)))
    supk = float(np.max(np.abs(evaluate_array(spec, xs, strict_floor(args.beta)))))
    holder_norm_val = sup0 + supk + hol.value
    report = {
        "function": spec_to_json(spec),
        "beta": args.beta,
        "grid_level": J,
        "sup_f": sup0,
        "sup_derivative": supk,
        "holder_seminorm": hol.to_json(),
        "holder_norm": "inf" if math.isinf(holder_norm_val) else holder_norm_val,
        "flatness_seminorm": flat.to_json(),
        "flat_norm": "inf"
        if math.isinf(holder_norm_val + flat.value)
        else holder_norm_val + flat.value,
    }
    os.makedirs(args.out, exist_ok=True)
    ext = "json" if args.format == "json" else "csv"
    _write(report, os.path.join(args.out, f"analyze_report.{ext}"), args.format)
    return EXIT_INFINITE if math.isinf(flat.value) or math.isinf(holder_norm_val) else EXIT_OK


def cmd_decay(args) -> int:
    spec = _load_function(args.function)
    S = args.wavelet_order
    if args.alpha * args.beta >= S:
        print(
            f"error: alpha*beta = {args.alpha * args.beta} must be below the "
            f"wavelet order {S}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    J = args.grid_level
    mode = "interior_only" if args.boundary == "interior" else "periodized"
    basis = build_basis(S, mode)
    grid = sample(spec, J)
    vals = np.asarray(grid.values)
    root = GridFunction(level=J, values=tuple(vals**args.alpha))
    dec = decompose(root, basis, 4)
    norm = flat_norm(spec, args.beta, min(J, 12))
    interior = mode == "interior_only"
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "levels.csv"), "w", newline="") as fh:
        fh.write("j,level_sup,bound_value\n")
        for j in dec.levels:
            sup = level_sup(dec, j, interior)
            bound = (
                norm**args.alpha * 2.0 ** (-j * (args.alpha * args.beta + 0.5))
                if math.isfinite(norm)
                else math.inf
            )
            fh.write(
                f"{j},{jsonio.format_float(sup).strip(chr(34))},"
                f"{jsonio.format_float(bound).strip(chr(34))}\n"
            )
    export_decomposition_csv(dec, os.path.join(args.out, "coefficients.csv"))
    try:
        fit = decay_fit(dec, 4, J - 3, interior_only=interior)
        payload = {"degenerate": False, **fit.to_json()}
    except DegenerateFit as exc:
        payload = {"degenerate": True, "reason": str(exc)}
    jsonio.dump(payload, os.path.join(args.out, "fit.json"))
    return EXIT_OK


def cmd_certify(args) -> int:
    spec = _load_function(args.function)
    budget = math.inf if args.kappa_budget is None else args.kappa_budget
    rep = membership(spec, args.beta, budget, args.grid_level)
    os.makedirs(args.out, exist_ok=True)
    jsonio.dump(rep.to_json(), os.path.join(args.out, "certify_report.json"))
    return EXIT_OK if rep.member else EXIT_INFINITE


def cmd_suite(args) -> int:
    if args.config:
        with open(args.config) as fh:
            config = SuiteConfig.from_json(json.load(fh))
    else:
        config = default_config()
    result = run_suite(config)
    write_suite_outputs(result, args.out)
    return EXIT_OK if result.passed else EXIT_SUITE_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holdercone",
        description="Flatness seminorms, root calculus, and wavelet decay analysis on [0,1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, function_required=True):
        if function_required:
            p.add_argument("--function", required=True, help="path to a function JSON or inline JSON")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("analyze", help="Hoelder and flatness norms with witnesses")
    common(p)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--grid-level", type=int, default=12)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decay", help="wavelet level sups and decay-slope fit of f**alpha")
    common(p)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--grid-level", type=int, default=14)
    p.add_argument("--wavelet-order", type=int, default=4)
    p.add_argument("--boundary", choices=("interior", "periodized"), default="interior")
    p.set_defaults(func=cmd_decay)

    p = sub.add_parser("certify", help="flatness-condition membership with a kappa budget")
    common(p)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--kappa-budget", type=float, default=None)
    p.add_argument("--grid-level", type=int, default=12)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("suite", help="run the verification suite")
    p.add_argument("--config", default=None, help="suite config JSON (defaults to built-in)")
    p.add_argument("--out", default="out")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_suite)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (HolderConeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
