"""Command-line entry points ``zeta`` and ``decomp``.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 enumeration
budget exceeded. The resolved configuration of every run is echoed to stderr;
stdout carries only results, so it is identical across ``--threads`` values.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from . import BACKEND, fixture_path
from .arith import (
    Ideal,
    QuadraticField,
    dedekind_mobius_coeffs,
    dedekind_zeta_coeffs,
    ideal_poset,
    mobius_coeffs,
    riemann_coeffs,
)
from .arithscheme import ArithmeticScheme, global_coeffs
from .errors import FieldTooLarge, InconsistentCounts, NotInvertible, NotRational, ZetaError
from .ffgeom import (
    BUDGET_ENV,
    VarietySpec,
    ZeroCycle,
    ZeroCyclePoset,
    closed_point_counts,
    default_budget,
    iter_0cycles,
    point_counts,
    weil_functional_check,
    zeta_from_counts,
)
from .poset import (
    Chain,
    Divisibility,
    FinitePoset,
    convolve,
    delta_el,
    mobius_el,
    zeta_el,
)
from .series import rational_reconstruct
from .simplicial import (
    TruncatedSimplicialSet,
    _id_str,
    check_decomposition,
    convolve_functionals,
    counit,
    mobius_functional,
    nerve,
    zeta_functional,
)
from .verify import SUITES, run_verify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Output:
    config: dict
    obj: Any = None
    # (first index, values) for coefficient-vector results
    vector: tuple[int, list] | None = None
    bare_vector: bool = False
    status: int = EXIT_OK


def _exact(x):
    """Recursively turn numbers into exact rational strings."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, Fraction)):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _exact(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_exact(v) for v in x]
    raise TypeError(f"cannot serialise {type(x).__name__} exactly")


def _pair(text: str, name: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"{name} expects two integers separated by a comma, got {text!r}") from None
    return a, b


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _variety(args) -> VarietySpec:
    if args.preset:
        presets = {v["name"]: v for v in _load_json(str(fixture_path("varieties.json")))["varieties"]}
        if args.preset not in presets:
            raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(presets)}")
        if args.poly:
            raise UsageError("--preset and --poly are mutually exclusive")
        v = presets[args.preset]
        return VarietySpec.parse(v["ambient"], v["polynomials"])
    if not args.ambient:
        raise UsageError("--ambient (or --preset) is required")
    return VarietySpec.parse(args.ambient, args.poly or [])


def _budget(args) -> int:
    return args.budget if getattr(args, "budget", None) is not None else default_budget()


# --- commands -------------------------------------------------------------------------

def cmd_riemann(args) -> Output:
    c = riemann_coeffs(args.terms)
    return Output({"command": "riemann", "terms": args.terms}, vector=(1, list(c)), bare_vector=True)


def cmd_mobius(args) -> Output:
    c = mobius_coeffs(args.terms)
    return Output({"command": "mobius", "terms": args.terms}, vector=(1, list(c)), bare_vector=True)


def cmd_dedekind(args) -> Output:
    fn = dedekind_mobius_coeffs if args.mobius else dedekind_zeta_coeffs
    c = fn(args.disc, args.terms)
    cfg = {"command": "dedekind", "disc": args.disc, "terms": args.terms, "mobius": args.mobius}
    return Output(cfg, vector=(1, list(c)), bare_vector=True)


def cmd_variety(args) -> Output:
    X = _variety(args)
    budget = _budget(args)
    cfg = {"command": "variety", "q": args.q, "order": args.order, "budget": budget}
    cfg.update(X.describe())
    if args.check_functional and not args.reconstruct:
        raise UsageError("--check-functional needs --reconstruct to produce a rational function")
    N = point_counts(X, args.q, args.order, budget, args.threads)
    Z = zeta_from_counts(N)
    result: dict = {"counts": N, "closed_points": closed_point_counts(N), "zeta": list(Z.coeffs)}
    status = EXIT_OK
    if args.reconstruct:
        nd, dd = _pair(args.reconstruct, "--reconstruct")
        cfg["reconstruct"] = [nd, dd]
        R = rational_reconstruct(Z, nd, dd)
        result["rational"] = None if R is None else {"numerator": list(R.numerator),
                                                     "denominator": list(R.denominator)}
        if args.check_functional:
            n, E = _pair(args.check_functional, "--check-functional")
            cfg["check_functional"] = [n, E]
            if R is None:
                raise NotRational(f"no rational function with degrees ({nd}, {dd}) matches to order {args.order}")
            fe = weil_functional_check(R, args.q, n, E)
            result["functional_equation"] = {"holds": fe.holds, "epsilon": fe.epsilon}
            if not fe.holds:
                status = EXIT_FAIL
    return Output(cfg, result, vector=(0, list(Z.coeffs)), status=status)


def cmd_arith(args) -> Output:
    budget = _budget(args)
    X = ArithmeticScheme.parse(args.scheme)
    cfg = {"command": "arith", "scheme": X.name, "terms": args.terms, "budget": budget}
    c = list(global_coeffs(X, args.terms, args.threads, budget))
    if not args.compare:
        return Output(cfg, vector=(1, c), bare_vector=True)
    Y = ArithmeticScheme.parse(args.compare)
    cfg["compare"] = Y.name
    d = list(global_coeffs(Y, args.terms, args.threads, budget))
    diff = next(({"n": n, "scheme": a, "compare": b} for n, (a, b) in enumerate(zip(c, d), 1) if a != b), None)
    result = {"equal": diff is None, "first_difference": diff, "scheme": c, "compare": d}
    return Output(cfg, result, status=EXIT_OK if diff is None else EXIT_FAIL)


_ELEMENTS = ("zeta", "mobius", "delta", "zeta2")


def _element(name: str, P):
    if name == "zeta":
        return zeta_el(P)
    if name == "delta":
        return delta_el(P)
    if name == "mobius":
        return mobius_el(P)
    return convolve(zeta_el(), zeta_el(), P)


def _parse_element(token: str, P):
    if isinstance(P, (Chain, Divisibility)):
        try:
            return int(token)
        except ValueError:
            raise UsageError(f"poset elements are integers, got {token!r}") from None
    for e in P.elements:
        if str(e) == token:
            return e
    raise UsageError(f"{token!r} is not an element of the poset")


def cmd_poset(args) -> Output:
    kind = args.poset
    cfg: dict = {"command": "poset", "poset": kind, "element": args.element}
    if (args.interval is None) == (args.series is None):
        raise UsageError("give exactly one of --interval X,Y and --series N")
    if kind in ("chain", "divisibility") or kind.startswith("file:"):
        if kind == "chain":
            P = Chain()
        elif kind == "divisibility":
            P = Divisibility()
        else:
            P = FinitePoset.from_json(_load_json(kind[5:]))
        el = _element(args.element, P)
        if args.interval is not None:
            x, _, y = args.interval.partition(",")
            x, y = _parse_element(x, P), _parse_element(y, P)
            cfg["interval"] = [str(x), str(y)]
            size = len(P.checked_interval(x, y))
            return Output(cfg, {"interval": [str(x), str(y)], "size": size, "value": el(x, y)})
        if kind.startswith("file:"):
            raise UsageError("--series needs a graded built-in poset")
        cfg["series"] = args.series
        lo = 0 if kind == "chain" else 1
        return Output(cfg, vector=(lo, [el(lo, n) for n in range(lo, args.series + 1)]), bare_vector=True)
    if args.interval is not None:
        raise UsageError("ideal and 0-cycle posets support --series only")
    cfg["series"] = args.series
    if kind.startswith("ideals:"):
        try:
            K = QuadraticField(int(kind[7:]))
        except ValueError:
            raise UsageError(f"bad discriminant in {kind!r}") from None
        P = ideal_poset(K)
        el = _element(args.element, P)
        unit = Ideal(())
        vals = [sum((el(unit, a) for a in K.ideals_of_norm(n)), Fraction(0)) for n in range(1, args.series + 1)]
        return Output(cfg, vector=(1, vals), bare_vector=True)
    if kind == "cycles":
        if args.q is None:
            raise UsageError("the cycles poset needs --q")
        X = _variety(args)
        budget = _budget(args)
        cfg.update(X.describe())
        cfg.update(q=args.q, budget=budget)
        a = closed_point_counts(point_counts(X, args.q, args.series, budget, args.threads))
        P = ZeroCyclePoset()
        el = _element(args.element, P)
        zero = ZeroCycle(())
        vals = [sum((el(zero, c) for c in iter_0cycles(a, n)), Fraction(0)) for n in range(args.series + 1)]
        return Output(cfg, vector=(0, vals), bare_vector=True)
    raise UsageError(f"unknown poset {kind!r}; use chain, divisibility, ideals:D, cycles or file:PATH")


def cmd_verify(args) -> Output:
    report = run_verify(args.suite, args.threads)
    return Output({"command": "verify", "suite": args.suite}, report,
                  status=EXIT_OK if report["passed"] else EXIT_FAIL)


def cmd_decomp_check(args) -> Output:
    K = TruncatedSimplicialSet.from_json(_load_json(args.input))
    L = args.level if args.level is not None else K.L
    res = check_decomposition(K, L, args.threads)
    cfg = {"command": "decomp check", "input": args.input, "level": L}
    return Output(cfg, res.to_json(), status=EXIT_OK if res else EXIT_FAIL)


def cmd_decomp_nerve(args) -> Output:
    P = FinitePoset.from_json(_load_json(args.poset))
    K = nerve(P, args.level)
    cfg = {"command": "decomp nerve", "poset": args.poset, "level": args.level, "out": args.out}
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(K.dumps() + "\n")
        return Output(cfg, {"out": args.out, "level_sizes": [len(level) for level in K.levels]})
    return Output(cfg, K.to_json())


def _functional(spec: str, K: TruncatedSimplicialSet) -> dict:
    if spec == "zeta":
        return zeta_functional(K)
    if spec in ("delta", "counit"):
        return counit(K)
    if spec == "mobius":
        return mobius_functional(K)
    data = _load_json(spec)
    ids = {_id_str(f): f for f in K.levels[1]}
    unknown = sorted(set(data) - set(ids))
    if unknown:
        raise UsageError(f"functional mentions unknown edges {unknown}")
    try:
        return {f: Fraction(data.get(s, 0)) for s, f in ids.items()}
    except (ValueError, ZeroDivisionError, TypeError):
        raise UsageError(f"functional values in {spec} must be exact rationals") from None


def cmd_decomp_convolve(args) -> Output:
    K = TruncatedSimplicialSet.from_json(_load_json(args.input))
    phi, psi = _functional(args.phi, K), _functional(args.psi, K)
    out = convolve_functionals(phi, psi, K)
    cfg = {"command": "decomp convolve", "input": args.input, "phi": args.phi, "psi": args.psi}
    table = {_id_str(f): out[f] for f in K.levels[1]}
    if args.edge is not None:
        if args.edge not in table:
            raise UsageError(f"{args.edge!r} is not an edge")
        cfg["edge"] = args.edge
        table = {args.edge: table[args.edge]}
    return Output(cfg, table)


# --- parser ---------------------------------------------------------------------------

def _common(defaults: bool) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--format", choices=("json", "csv", "pretty"), help="output format (default json)",
                   **({"default": "json"} if defaults else kw))
    p.add_argument("--threads", type=_positive, help="cap on worker threads (default 1)",
                   **({"default": 1} if defaults else kw))
    return p


def _variety_flags(p: argparse.ArgumentParser, required_q: bool) -> None:
    p.add_argument("--q", type=_positive, required=required_q, help="field size p^k")
    p.add_argument("--ambient", help="affine:m or projective:m")
    p.add_argument("--poly", action="append", help="defining polynomial; repeat for several")
    p.add_argument("--preset", help="named variety from the bundled fixtures")
    p.add_argument("--budget", type=_positive, help=f"enumeration budget (default ${BUDGET_ENV} or 10^7)")


def _add_decomp(sub, common) -> None:
    ch = sub.add_parser("check", parents=[common], help="check the decomposition condition up to a level")
    ch.add_argument("--input", required=True, help="simplicial set JSON")
    ch.add_argument("--level", type=_nonneg, help="level bound L (default: top level of the input)")
    ch.set_defaults(func=cmd_decomp_check)
    ne = sub.add_parser("nerve", parents=[common], help="nerve of a finite poset as simplicial-set JSON")
    ne.add_argument("--poset", required=True, help="poset JSON with elements and covers")
    ne.add_argument("--level", type=_nonneg, required=True)
    ne.add_argument("--out", help="write the JSON here instead of stdout")
    ne.set_defaults(func=cmd_decomp_nerve)
    co = sub.add_parser("convolve", parents=[common], help="convolve two functionals on K_1")
    co.add_argument("--input", required=True, help="simplicial set JSON")
    co.add_argument("--phi", required=True, help="zeta, mobius, delta or a JSON file {edge: value}")
    co.add_argument("--psi", required=True, help="zeta, mobius, delta or a JSON file {edge: value}")
    co.add_argument("--edge", help="report only this edge id")
    co.set_defaults(func=cmd_decomp_convolve)


def build_parser(prog: str = "zeta") -> argparse.ArgumentParser:
    common = _common(False)
    parser = argparse.ArgumentParser(prog=prog, parents=[_common(True)],
                                     description="Exact zeta functions, Mobius inversion and incidence algebras.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("riemann", parents=[common], help="Dirichlet coefficients of the Riemann zeta function")
    p.add_argument("--terms", type=_positive, required=True)
    p.set_defaults(func=cmd_riemann)

    p = sub.add_parser("mobius", parents=[common], help="classical Mobius function mu(1..N)")
    p.add_argument("--terms", type=_positive, required=True)
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("dedekind", parents=[common], help="Dedekind zeta coefficients of a quadratic field")
    p.add_argument("--disc", type=int, required=True, help="fundamental discriminant")
    p.add_argument("--terms", type=_positive, required=True)
    p.add_argument("--mobius", action="store_true", help="coefficients of the inverse series instead")
    p.set_defaults(func=cmd_dedekind)

    p = sub.add_parser("variety", parents=[common], help="Hasse-Weil zeta function over a finite field")
    _variety_flags(p, required_q=True)
    p.add_argument("--order", type=_positive, required=True, help="truncation order M")
    p.add_argument("--reconstruct", metavar="ND,DD", help="numerator and denominator degree bounds")
    p.add_argument("--check-functional", metavar="N,E", help="test the functional equation with dimension N")
    p.set_defaults(func=cmd_variety)

    p = sub.add_parser("arith", parents=[common], help="zeta coefficients of an arithmetic scheme")
    p.add_argument("--scheme", required=True,
                   help="specz, affine:n, projective:n, specok:D or poly:<affine|projective>:<m>:<f1>;<f2>")
    p.add_argument("--terms", type=_positive, required=True)
    p.add_argument("--compare", metavar="SCHEME", help="second scheme to diff against")
    p.add_argument("--budget", type=_positive, help=f"enumeration budget (default ${BUDGET_ENV} or 10^7)")
    p.set_defaults(func=cmd_arith)

    p = sub.add_parser("poset", parents=[common], help="incidence-algebra values on a built-in or JSON poset")
    p.add_argument("--poset", required=True, help="chain, divisibility, ideals:D, cycles or file:PATH")
    p.add_argument("--element", choices=_ELEMENTS, default="mobius")
    p.add_argument("--interval", metavar="X,Y", help="evaluate on the interval [X, Y]")
    p.add_argument("--series", type=_nonneg, metavar="N", help="graded sums up to degree or norm N")
    _variety_flags(p, required_q=False)
    p.set_defaults(func=cmd_poset)

    p = sub.add_parser("decomp", parents=[common], help="decomposition-space tools")
    _add_decomp(p.add_subparsers(dest="decomp_command", required=True, metavar="ACTION"), common)

    p = sub.add_parser("verify", parents=[common], help="run a built-in verification suite")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(SUITES)} or all")
    p.set_defaults(func=cmd_verify)
    return parser


# --- output ---------------------------------------------------------------------------

def _render(out: Output, fmt: str) -> str:
    if fmt == "csv":
        if out.vector is None:
            raise UsageError("csv output is only available for coefficient vectors")
        start, values = out.vector
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "value"])
        for i, v in enumerate(values, start):
            w.writerow([i, str(v)])
        return buf.getvalue()
    if fmt == "pretty":
        if out.obj is None:
            start, values = out.vector
            width = len(str(start + len(values) - 1))
            return "".join(f"{i:>{width}}  {v}\n" for i, v in enumerate(values, start))
        return "\n".join(_pretty(_exact(out.obj))) + "\n"
    if out.obj is None and out.bare_vector:
        return json.dumps(_exact(out.vector[1])) + "\n"
    return json.dumps({"config": _exact(out.config), "result": _exact(out.obj)}, indent=2) + "\n"


def _pretty(x, indent: int = 0) -> list[str]:
    pad = "  " * indent
    if isinstance(x, dict):
        lines = []
        for k, v in x.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_pretty(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return lines
    if isinstance(x, list) and not _flat(x):
        lines = []
        for v in x:
            sub = _pretty(v, indent + 1)
            lines.append(f"{pad}- " + sub[0].lstrip())
            lines.extend(sub[1:])
        return lines
    return [pad + _inline(x)]


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(e, (dict, list)) for e in v)


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(e) for e in v) + "]"
    if isinstance(v, dict):
        return "{}"
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def build_decomp_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decomp", parents=[_common(True)],
                                     description="Decomposition-space checks on truncated simplicial sets.")
    _add_decomp(parser.add_subparsers(dest="decomp_command", required=True, metavar="ACTION"), _common(False))
    return parser


def main(argv: Sequence[str] | None = None, prog: str = "zeta") -> int:
    parser = build_decomp_parser() if prog == "decomp" else build_parser(prog)
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "json")
    threads = getattr(args, "threads", 1)
    args.format, args.threads = fmt, threads
    try:
        out = args.func(args)
        echo = dict(out.config, format=fmt, threads=threads, backend=BACKEND)
        print("config: " + json.dumps(_exact(echo), sort_keys=True), file=sys.stderr)
        text = _render(out, fmt)
    except UsageError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FieldTooLarge as exc:
        print(f"{prog}: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NotRational, NotInvertible, InconsistentCounts) as exc:
        print(f"{prog}: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ZetaError, ValueError) as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(text)
    sys.stdout.flush()
    return out.status


def decomp_main(argv: Sequence[str] | None = None) -> int:
    return main(argv, prog="decomp")


def _console() -> None:
    sys.exit(main())


if __name__ == "__main__":
    _console()
