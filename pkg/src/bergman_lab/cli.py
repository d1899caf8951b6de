"""Command-line front end: ``bergman-lab <command> [flags]`` or ``python3 -m bergman_lab``."""

import argparse
import datetime
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .classifier import ExponentPair, classify, diagram_region
from .errors import ConvergenceError, DivergenceError, DomainError
from .export import region_csv, region_svg
from .hls_verifier import concentrating_bumps, probe_boundedness, verify_hls, verify_weak_type
from .kernel_integrals import Params, hs_trace, mc_rudin_integral, rudin_integral
from .norm_bounds import (norm_l1_to_lq, norm_linf_to_l1_exact_d1, norm_lp_to_linf,
                          upper_bound_general, upper_bound_linf_to_lq, hls_constants)
from .operator_engine import euler_jacobi_check, l2_spectral_report

EXIT_OK, EXIT_ERROR, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(v):
    if isinstance(v, Fraction):
        return _frac(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, (np.floating, np.integer)):
        return _jsonable(v.item())
    if isinstance(v, np.bool_):
        return bool(v)
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    return v


def _frac(v):
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _params(args):
    # "5/2" and "3" stay exact; decimal notation is read as a float
    alpha = args.alpha
    if any(ch in alpha.lower() for ch in ".e"):
        try:
            alpha = float(alpha)
        except ValueError as exc:
            raise UsageError(f"cannot read --alpha {args.alpha!r}") from exc
    return Params(args.d, alpha)


# ---------------------------------------------------------------------------
# Commands: each returns (payload dict, text summary)
# ---------------------------------------------------------------------------

def cmd_classify(args):
    params = _params(args)
    e = ExponentPair.from_pq(args.p, args.q)
    v = classify(params, e)
    payload = {"verdict": v.as_dict(), "exponents": {"p": args.p, "q": args.q},
               "formula_source": v.clause, "method": "exact-rational"}
    if v.clause.endswith("boundary-ambiguous"):
        payload["warning"] = "alpha given as a float lies within 1e-12 of a boundary"
    text = (f"bounded={str(v.bounded).lower()} compact={str(v.compact).lower()} "
            f"clause={v.clause}")
    return payload, text


def cmd_diagram(args):
    params = _params(args)
    region = diagram_region(params, args.resolution)
    if args.format == "svg":
        body = region_svg(region)
    elif args.format == "csv":
        body = region_csv(region)
    else:
        raise UsageError("diagram writes svg or csv")
    return body, None


def cmd_norm(args):
    params = _params(args)
    kind = args.kind
    if kind == "l1-lq":
        b = norm_l1_to_lq(params, _num(args.q, "q"))
    elif kind == "lp-linf":
        b = norm_lp_to_linf(params, _num(args.p, "p"))
    elif kind == "linf-l1":
        if params.d != 1:
            raise DomainError("linf-l1 closed form is for d = 1")
        b = norm_linf_to_l1_exact_d1(params.alpha)
    elif kind == "linf-lq":
        b = upper_bound_linf_to_lq(params, _num(args.q, "q"))
    elif kind == "general":
        b = upper_bound_general(params, ExponentPair.from_pq(_req(args.p, "p"), _req(args.q, "q")))
    elif kind == "hls":
        b = hls_constants(params, _num(args.p, "p"), _num(args.s, "s"))
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(kind)
    payload = {"norm": b.as_dict(), "formula_source": b.source, "method": "closed-form"}
    return payload, f"{b.kind} {b.value!r} ({b.source})"


def cmd_trace(args):
    params = _params(args)
    value = hs_trace(params)
    method = "closed-form" if params.d == 1 else "radial-quadrature"
    payload = {"trace": value, "formula_source": "Thm5" if params.d == 1 else "Eq-tra",
               "method": method}
    if args.check_series:
        rep = l2_spectral_report(params, N=args.n)
        payload["series"] = {"value": rep.square_sum, "partial_sum": rep.partial_sum,
                             "tail": rep.tail, "truncation": args.n}
    return payload, repr(value)


def cmd_spectrum(args):
    params = _params(args)
    rep = l2_spectral_report(params, N=args.n_sum, n_eigen=args.n - 1)
    eig = [float(c) for c in rep.eigenvalues[: args.n]]
    payload = {"eigenvalues": eig, "norm": rep.norm, "hilbert_schmidt": rep.hilbert_schmidt,
               "square_sum": rep.square_sum, "notes": rep.notes,
               "formula_source": "Eq-KR", "method": "series"}
    return payload, " ".join(repr(x) for x in eig)


def cmd_identity(args):
    r = euler_jacobi_check(args.alpha_value, N=args.n)
    payload = {"alpha": r.alpha, "series": r.series, "closed_form": r.closed_form,
               "residual": r.residual, "tail": r.tail, "status": r.status,
               "truncation": args.n, "formula_source": "Eq-Eul", "method": "series"}
    return payload, f"residual={r.residual!r} status={r.status}"


def cmd_integral(args):
    params = Params(args.d, 0)
    value = rudin_integral(params, args.beta, args.gamma, args.r)
    payload = {"value": value, "beta": args.beta, "gamma": args.gamma, "r": args.r,
               "formula_source": "Lem-hi1", "method": "closed-form"}
    if args.mc:
        rng = np.random.default_rng(args.seed)
        est = mc_rudin_integral(params, args.beta, args.gamma, args.r, args.n_samples, rng)
        payload["monte_carlo"] = est.as_dict()
        payload["method"] = "closed-form+monte-carlo"
    return payload, repr(value)


def cmd_verify(args):
    params = _params(args)
    if args.kind == "hls":
        rep = verify_hls(params, _num(args.p, "p"), _num(args.s, "s"), args.trials, args.seed)
        payload = rep.as_dict()
        payload.update(formula_source=rep.bound.source, method="monte-carlo")
        text = f"violations={rep.violations} max_ratio={rep.max_ratio!r} bound={rep.bound.value!r}"
        return payload, text
    if args.kind == "weak":
        rep = verify_weak_type(params, args.trials, args.seed)
        payload = rep.as_dict()
        payload["bumps"] = [{"k": m.k, "quasinorm": m.quasinorm, "strong_norm": m.strong_norm}
                            for m in concentrating_bumps(params, seed=args.seed)]
        payload.update(formula_source="Cor-wea", method="monte-carlo")
        return payload, f"empirical weak-type constant {rep.max_ratio!r}"
    e = ExponentPair.from_pq(_req(args.p, "p"), _req(args.q, "q"))
    rep = probe_boundedness(params, e, seed=args.seed)
    payload = rep.as_dict()
    payload.update(seed=args.seed, formula_source=classify(params, e).clause, method="series")
    return payload, f"{rep.verdict} (classifier bounded={str(rep.classified_bounded).lower()})"


def _req(v, name):
    if v is None:
        raise UsageError(f"--{name} is required here")
    return v


def _num(v, name):
    v = _req(v, name)
    try:
        return float(Fraction(v)) if v.strip().lower() not in ("inf", "infinity") else math.inf
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot read --{name} {v!r}") from exc


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _common(p, with_params=True):
    if with_params:
        p.add_argument("--d", type=int, required=True, help="complex dimension d >= 1")
        p.add_argument("--alpha", required=True,
                       help="kernel order; rationals like 5/2 are kept exact")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("json", "text", "csv", "svg"), default="json")
    p.add_argument("--output", help="write to this path instead of stdout")
    p.add_argument("--no-timestamp", action="store_true",
                   help="omit the timestamp so repeated runs are byte-identical")


def build_parser():
    parser = _Parser(prog="bergman-lab", description="Bergman-type operators on the unit ball")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="boundedness and compactness L^p -> L^q")
    _common(p)
    p.add_argument("--p", required=True, help="source exponent (number, a/b or inf)")
    p.add_argument("--q", required=True, help="target exponent (number, a/b or inf)")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("diagram", help="type diagram as SVG or CSV")
    _common(p)
    p.add_argument("--resolution", type=int, default=64)
    p.set_defaults(func=cmd_diagram, format="svg")

    p = sub.add_parser("norm", help="closed-form norms and upper bounds")
    _common(p)
    p.add_argument("--kind", required=True,
                   choices=("l1-lq", "lp-linf", "linf-l1", "linf-lq", "general", "hls"))
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--s")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("trace", help="Hilbert-Schmidt trace of K_alpha^* K_alpha")
    _common(p)
    p.add_argument("--check-series", action="store_true",
                   help="also sum the eigenvalue squares with tail extrapolation")
    p.add_argument("--n", type=int, default=10 ** 6, help="series truncation")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("spectrum", help="eigenvalues, L^2 norm, eigenvalue-square sum")
    _common(p)
    p.add_argument("--n", type=int, default=10, help="number of eigenvalues to list")
    p.add_argument("--n-sum", type=int, default=10 ** 5, help="truncation for the square sum")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("identity", help="Euler-Jacobi identity check (d = 1)")
    _common(p, with_params=False)
    p.add_argument("--alpha", dest="alpha_value", type=float, required=True)
    p.add_argument("--n", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_identity)

    p = sub.add_parser("integral", help="the (1-|w|^2)^gamma |1-<z,w>|^-2beta integral")
    _common(p, with_params=False)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--r", type=float, required=True, help="|z|^2")
    p.add_argument("--mc", action="store_true", help="add a Monte Carlo estimate")
    p.add_argument("--n-samples", type=int, default=10 ** 6)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("verify", help="randomized HLS, weak-type and boundedness checks")
    _common(p)
    p.add_argument("--kind", choices=("hls", "weak", "probe"), required=True)
    p.add_argument("--p")
    p.add_argument("--q")
    p.add_argument("--s")
    p.add_argument("--trials", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def _render(args, payload, text):
    if isinstance(payload, str):
        return payload
    if args.format == "text":
        return (text or json.dumps(_jsonable(payload), sort_keys=True)) + "\n"
    if args.format in ("csv", "svg"):
        raise UsageError(f"--format {args.format} is only available for diagram")
    out = dict(payload)
    out["command"] = args.command
    out["seed"] = args.seed
    if getattr(args, "alpha", None) is not None:
        out.setdefault("params", {"d": args.d, "alpha": args.alpha})
    if not args.no_timestamp:
        out["timestamp"] = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return json.dumps(_jsonable(out), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, text = args.func(args)
        body = _render(args, payload, text)
    except UsageError as exc:
        print(f"bergman-lab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, DivergenceError, ConvergenceError, ArithmeticError, ValueError) as exc:
        print(f"bergman-lab: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(body)
        except OSError as exc:
            print(f"bergman-lab: cannot write {args.output}: {exc}", file=sys.stderr)
            return EXIT_ERROR
    else:
        sys.stdout.write(body)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
