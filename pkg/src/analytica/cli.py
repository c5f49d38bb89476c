"""Command-line entry point.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from fractions import Fraction

from . import gallery
from .composition import compose_jet, multinomial_partition_sum
from .convergence import (
    InsufficientDataError,
    InsufficientFamilyError,
    InsufficientPrefixError,
    WeightSeq,
    divergence_combination,
    nonanalytic_witness,
    radius_lower_bound,
    weight_boundedness_test,
)
from .io import (
    SCHEMA_VERSION,
    ParseError,
    RunConfig,
    format_scalar,
    parse_args_file,
    parse_curve_file,
    parse_element_file,
    parse_family_file,
    parse_form_file,
    parse_jet_file,
    parse_radius,
    parse_rational,
    parse_series_file,
    series_to_obj,
)
from .multilinear import FormError, eval_sym, polarize_binom, polarize_eps, polarize_scaled
from .seq_spaces import MODELS, PolyRadius, SpaceError, WeightedElement, inclusion_norm_bound, lpr_norm, model_cauchy_bound
from .series import SeriesError

OK, FAILED, USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _jsonable(x):
    if isinstance(x, (Fraction, float)):
        return format_scalar(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if getattr(args, "json", False):
        out = {"schema_version": SCHEMA_VERSION, "command": args.command}
        out.update(payload)
        print(json.dumps(_jsonable(out), indent=2))
    else:
        for line in text_lines:
            print(line)


def _weights(family: str, param) -> WeightSeq:
    if family == "inverse_factorial":
        return WeightSeq.inverse_factorial()
    if family == "scaled_inverse_factorial":
        return WeightSeq.scaled_inverse_factorial(parse_rational(param or "1"))
    if family == "gaussian":
        return WeightSeq.gaussian()
    raise ParseError(f"unknown weight family {family!r}")


# commands ---------------------------------------------------------------------------


def cmd_analyze(args, cfg) -> int:
    a = parse_series_file(args.series)
    r = _weights(args.weights, args.param)
    eps = parse_rational(args.eps)
    flag, sup = weight_boundedness_test(a, r, eps)
    try:
        radius = radius_lower_bound(a)
    except InsufficientDataError:
        radius = None
    payload = {"order": a.order, "weights": args.weights, "eps": eps, "bounded": flag, "sup": sup, "radius_estimate": radius}
    _emit(args, payload, [f"bounded: {flag}", f"sup: {format_scalar(sup)}", f"radius estimate: {radius}"])
    return OK


def cmd_witness(args, cfg) -> int:
    a = parse_series_file(args.series)
    try:
        w = nonanalytic_witness(a, args.n_max)
    except InsufficientPrefixError as exc:
        _emit(args, {"passed": False, "error": str(exc), "n": exc.n}, [f"FAIL: {exc}"])
        return FAILED
    payload = {
        "passed": w.passed,
        "blocks": w.blocks,
        "subadditive": w.subadditive,
        "divergence_evidence": w.divergence_evidence,
        "block_sums": w.block_sums,
    }
    _emit(args, payload, [f"blocks: {w.blocks}", f"subadditive: {w.subadditive}", f"divergence evidence: {w.divergence_evidence}", "PASS" if w.passed else "FAIL"])
    return OK if w.passed else FAILED


def cmd_diverge(args, cfg) -> int:
    fam = parse_family_file(args.family)
    try:
        w = divergence_combination(fam, args.m_max)
    except InsufficientFamilyError as exc:
        _emit(args, {"passed": False, "error": str(exc), "m": exc.m}, [f"FAIL: {exc}"])
        return FAILED
    failures = w.check()
    payload = {"passed": not failures, "k": w.k, "n": w.n, "t": w.t, "lower_bounds": w.lower_bounds, "chain_middle": w.chain_middle, "failures": failures}
    lines = [f"k_m: {w.k}", f"n_m: {w.n}", f"t_m: {[str(t) for t in w.t]}"] + failures + ["PASS" if not failures else "FAIL"]
    _emit(args, payload, lines)
    return OK if not failures else FAILED


def cmd_polarize(args, cfg) -> int:
    f = parse_form_file(args.form)
    data = parse_args_file(args.args)
    if args.route == "eps":
        if "args" not in data:
            raise ParseError("route eps needs 'args' (and optional 'x0')")
        x0 = data.get("x0", (0,) * f.dim)
        got = polarize_eps(f.diagonal, x0, data["args"])
        want = eval_sym(f, data["args"])
    else:
        if "x" not in data:
            raise ParseError(f"route {args.route} needs 'x' (and optional 'a')")
        a = data.get("a", (0,) * f.dim)
        route = polarize_binom if args.route == "binom" else polarize_scaled
        got = route(f.diagonal, a, data["x"], f.degree)
        want = f.diagonal(data["x"])
    exact = not isinstance(got, float) and not isinstance(want, float)
    ok = got == want if exact else math.isclose(float(got), float(want), rel_tol=cfg.tolerance, abs_tol=cfg.tolerance)
    _emit(args, {"route": args.route, "value": got, "oracle": want, "passed": ok}, [f"value: {format_scalar(got)}", f"oracle: {format_scalar(want)}", "PASS" if ok else "FAIL"])
    return OK if ok else FAILED


def cmd_compose(args, cfg) -> int:
    jet = parse_jet_file(args.f_jet)
    curve = parse_curve_file(args.curve)
    out = compose_jet(jet, curve, args.L)
    _emit(args, {"series": series_to_obj(out)}, [json.dumps(series_to_obj(out))])
    return OK


def cmd_partition_sum(args, cfg) -> int:
    if not 1 <= args.k <= args.l:
        raise ParseError(f"need 1 <= k <= l, got k={args.k}, l={args.l}")
    value = multinomial_partition_sum(args.k, args.l)
    expected = math.comb(args.l - 1, args.k - 1)
    _emit(args, {"k": args.k, "l": args.l, "value": value, "binomial": expected, "passed": value == expected}, [str(value)])
    return OK if value == expected else FAILED


def _p(text: str):
    return text if text == "inf" else int(text)


def cmd_norm(args, cfg) -> int:
    x = parse_element_file(args.element)
    r = PolyRadius(parse_radius(args.radius))
    value = lpr_norm(x, r, _p(args.p))
    _emit(args, {"p": args.p, "radius": list(r.r), "norm": value}, [str(format_scalar(value))])
    return OK


def _space(text: str):
    p, sep, radius = text.partition(":")
    if not sep:
        raise ParseError(f"space {text!r} must look like 'p:r1,r2'")
    return _p(p), PolyRadius(parse_radius(radius))


def cmd_inclusion(args, cfg) -> int:
    src, tgt = _space(args.source), _space(args.target)
    cert = inclusion_norm_bound(src, tgt)
    if cert is None:
        _emit(args, {"inclusion": None}, ["no inclusion bound for these parameters"])
        return OK
    rng = random.Random(cfg.seed)
    elems = [WeightedElement.random(src[1].n, rng) for _ in range(args.samples)]
    bad = cert.verify(elems)
    payload = {"bound": cert.bound, "reason": cert.reason, "surrogate": cert.surrogate, "samples": args.samples, "violations": len(bad), "seed": cfg.seed}
    _emit(args, payload, [f"bound: {format_scalar(cert.bound)} ({cert.reason})", f"violations: {len(bad)}/{args.samples} (seed {cfg.seed})"])
    return OK if not bad else FAILED


def cmd_cauchy(args, cfg) -> int:
    rho = parse_rational(args.rho)
    bounds, model = model_cauchy_bound(args.model, rho, args.grid)
    coeffs = [model.coefficient(k) for k in range(args.k_max + 1)]
    bad = bounds.violations(coeffs)
    payload = {"model": args.model, "rho": rho, "M": bounds.M, "grid": bounds.grid, "bounds": bounds.bounds(args.k_max), "violations": bad}
    _emit(args, payload, [f"M = {bounds.M} on grid {bounds.grid}", f"violations up to k={args.k_max}: {len(bad)}"])
    return OK if not bad else FAILED


def cmd_gallery(args, cfg) -> int:
    reports = gallery.run_gallery(args.only, seed=cfg.seed)
    passed = all(r.passed for r in reports)
    if args.json:
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": "gallery", "seed": cfg.seed, "passed": passed, "reports": [r.to_dict() for r in reports]}, indent=2))
    else:
        print(f"seed {cfg.seed}")
        for r in reports:
            for c in r.checks:
                print(f"{'PASS' if c.passed else 'FAIL'}  {c.location}  [{c.provenance}, tol {c.tolerance:g}]")
        print("gallery: " + ("all checks passed" if passed else "FAILED"))
    return OK if passed else FAILED


# parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=None, help="sampling seed (default: $ANALYTICA_SEED or fixed)")

    parser = _Parser(prog="analytica", description="Truncated power series and multilinear form analysis")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("analyze", parents=[common], help="weighted boundedness and radius estimate")
    p.add_argument("--series", required=True)
    p.add_argument("--weights", default="inverse_factorial", choices=["inverse_factorial", "scaled_inverse_factorial", "gaussian"])
    p.add_argument("--param", default=None, help="c for scaled_inverse_factorial")
    p.add_argument("--eps", required=True)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("witness", parents=[common], help="nonanalyticity witness")
    p.add_argument("--series", required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("diverge", parents=[common], help="divergent combination of a germ family")
    p.add_argument("--family", required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.set_defaults(func=cmd_diverge)

    p = sub.add_parser("polarize", parents=[common], help="polarization against the full expansion")
    p.add_argument("--form", required=True)
    p.add_argument("--route", choices=["eps", "binom", "scaled"], required=True)
    p.add_argument("--args", required=True)
    p.set_defaults(func=cmd_polarize)

    p = sub.add_parser("compose", parents=[common], help="Taylor coefficients of f o c")
    p.add_argument("--f-jet", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("-L", type=int, required=True)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("partition-sum", parents=[common], help="sum of k!/prod m_n! over partitions")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-l", type=int, required=True)
    p.set_defaults(func=cmd_partition_sum)

    p = sub.add_parser("norm", parents=[common], help="weighted l^p norm of an element")
    p.add_argument("--element", required=True)
    p.add_argument("--radius", required=True)
    p.add_argument("-p", choices=["1", "2", "inf"], default="1")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("inclusion", parents=[common], help="inclusion norm bound between weighted spaces")
    p.add_argument("--from", dest="source", required=True, help="p:r1,r2")
    p.add_argument("--to", dest="target", required=True, help="q:s1,s2")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_inclusion)

    p = sub.add_parser("cauchy", parents=[common], help="Cauchy coefficient bounds for a built-in model")
    p.add_argument("--model", choices=sorted(MODELS), required=True)
    p.add_argument("--rho", required=True)
    p.add_argument("--k-max", type=int, default=40)
    p.add_argument("--grid", type=int, default=256)
    p.set_defaults(func=cmd_cauchy)

    p = sub.add_parser("gallery", help="counterexample gallery")
    gsub = p.add_subparsers(dest="action", parser_class=_Parser)
    gsub.required = True
    run = gsub.add_parser("run", parents=[common], help="run the gallery")
    run.add_argument("--only", action="append", choices=list(gallery.EXAMPLE_IDS))
    fmt = run.add_mutually_exclusive_group()
    fmt.add_argument("--text", dest="json", action="store_false")
    run.set_defaults(func=cmd_gallery)
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    try:
        cfg = RunConfig.from_env(seed=args.seed, output="json" if args.json else "text")
        return args.func(args, cfg)
    except (ParseError, SeriesError, FormError, SpaceError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"analytica {args.command}: error: {msg}", file=sys.stderr)
        return USAGE


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
