"""Command-line front end: ``degseq <command> [options]``.

Exit codes: 0 decided or done, 1 bad input, 2 undecided, 3 resource guard,
4 internal contract failure.  JSON output carries ``"schema": "dsp/1"``
and is byte-identical for identical arguments.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import counterexample, experiments, oracle, reductions, zonotope
from .core import EdgeSet, as_rational_vector, check_degree_vector, format_rational
from .errors import ContractError, DSPError, InputRangeError, ResourceLimitError
from .realize import NotInZonotope, Realized, realize

EXIT_OK, EXIT_INPUT, EXIT_UNDECIDED, EXIT_RESOURCE, EXIT_INTERNAL = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _rationals(text: str) -> list:
    try:
        return list(as_rational_vector(x.strip() for x in text.split(",") if x.strip()))
    except (ValueError, ZeroDivisionError, InputRangeError) as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers or p/q, got {text!r}") from exc


def _check_d(args, vec):
    if args.d is not None and args.d != len(vec):
        raise InputRangeError(f"--d {args.d} does not match a vector of length {len(vec)}")


def _hypergraph(H: EdgeSet) -> dict:
    return H.to_dict()


def cmd_decide(args) -> tuple[dict, int]:
    b = check_degree_vector(args.b, bounded=False)
    _check_d(args, b)
    out = {"command": "decide", "d": len(b), "b": list(b), "method": args.method}
    config = dict(max_pivots=args.max_pivots)
    if args.method == "dp":
        witness = oracle.is_realizable(b, max_states=args.oracle_max_states)
        if witness is None:
            out["status"] = "not_realizable"
        else:
            out.update(status="realizable", witness=_hypergraph(witness))
        return out, EXIT_OK
    if args.method == "lp":
        res = zonotope.membership(b, **config)
        if not res.inside:
            out.update(status="not_realizable", separator=res.certificate.to_dict())
            return out, EXIT_OK
        dec = res.decomposition
        if not dec.fractional:
            out.update(status="realizable", witness=_hypergraph(dec.integral))
            return out, EXIT_OK
        out.update(status="undecided", reason="in the zonotope; basic solution is fractional",
                   decomposition=dec.to_dict())
        return out, EXIT_UNDECIDED
    outcome = realize(b, fallback=not args.no_fallback, oracle_max_states=args.oracle_max_states, **config)
    if isinstance(outcome, Realized):
        out.update(status="realizable", witness=_hypergraph(outcome.witness))
        if outcome.trace is not None:
            out["trace"] = outcome.trace.to_dict()
        return out, EXIT_OK
    if isinstance(outcome, NotInZonotope):
        out.update(status="not_realizable", separator=outcome.certificate.to_dict())
        return out, EXIT_OK
    out.update(status="undecided", reason=outcome.reason)
    return out, EXIT_UNDECIDED


def cmd_enumerate(args) -> tuple[dict, int]:
    if args.d > 5 and not args.stretch:
        raise InputRangeError("d = 6 runs for hours; pass --stretch to confirm")
    report = experiments.enumerate_report(args.d, _config(args))
    return _with_timing(report, args), EXIT_OK


def cmd_sample(args) -> tuple[dict, int]:
    report = experiments.sample_report(args.d, args.count, _config(args), sampler=args.sampler)
    return _with_timing(report, args), EXIT_OK


def cmd_counterexample(args) -> tuple[dict, int]:
    cert = counterexample.emit_certificate(counterexample.build_spec(args.n, args.ks))
    return {"command": "counterexample", "certificate": cert.to_dict()}, EXIT_OK


def cmd_reduce3(args) -> tuple[dict, int]:
    _check_d(args, args.b)
    red = reductions.reduce_3uniform(args.b)
    return {"command": "reduce3", "reduced": red.to_dict()}, EXIT_OK


def cmd_knapsack(args) -> tuple[dict, int]:
    res = reductions.count_knapsack(args.a, args.beta)
    return {"command": "knapsack", "knapsack": res.to_dict()}, EXIT_OK


def cmd_linopt(args) -> tuple[dict, int]:
    value = reductions.linopt_over_Z(args.w)
    return {"command": "linopt", "d": len(args.w), "value": format_rational(value)}, EXIT_OK


def cmd_support(args) -> tuple[dict, int]:
    value = zonotope.support_function(args.c)
    return {"command": "support", "d": len(args.c), "value": format_rational(value)}, EXIT_OK


def _config(args) -> experiments.RunConfig:
    return experiments.RunConfig(seed=getattr(args, "seed", 0), threads=getattr(args, "threads", 1),
                                 oracle_max_states=args.oracle_max_states, max_pivots=args.max_pivots)


def _with_timing(report: dict, args) -> dict:
    out = experiments.public(report)
    if args.timings:
        out["seconds"] = round(report["_seconds"], 3)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-pivots", type=int, default=zonotope.DEFAULT_MAX_PIVOTS)
    common.add_argument("--oracle-max-states", type=int, default=oracle.DEFAULT_MAX_STATES)

    p = _Parser(prog="degseq", description="Hypergraph degree sequences and the degree-sequence zonotope.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("decide", parents=[common], help="is b a degree sequence?")
    s.add_argument("--d", type=int)
    s.add_argument("--b", type=_ints, required=True)
    s.add_argument("--method", choices=("auto", "lp", "dp"), default="auto")
    s.add_argument("--no-fallback", action="store_true", help="auto: never call the DP oracle")
    s.set_defaults(func=cmd_decide)

    s = sub.add_parser("enumerate", parents=[common], help="exhaustive lattice check for small d")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--stretch", action="store_true", help="allow d = 6")
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("sample", parents=[common], help="random points: realized / undecided / outside")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--count", type=int, default=100)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=int, default=1)
    s.add_argument("--sampler", choices=("ellipsoid", "box"), default="ellipsoid")
    s.add_argument("--timings", action="store_true")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("counterexample", parents=[common], help="face certificate for non-realizable points")
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--ks", type=_ints, default=[2, 4])
    s.set_defaults(func=cmd_counterexample)

    s = sub.add_parser("reduce3", parents=[common], help="3-uniform instance to a degree-sequence instance")
    s.add_argument("--d", type=int)
    s.add_argument("--b", type=_ints, required=True)
    s.set_defaults(func=cmd_reduce3)

    s = sub.add_parser("knapsack", parents=[common], help="count x in {0,1}^d with a.x < beta")
    s.add_argument("--a", type=_ints, required=True)
    s.add_argument("--beta", type=int, required=True)
    s.set_defaults(func=cmd_knapsack)

    s = sub.add_parser("linopt", parents=[common], help="max <w, x> over the zonotope")
    s.add_argument("--w", type=_rationals, required=True)
    s.set_defaults(func=cmd_linopt)

    s = sub.add_parser("support", parents=[common], help="support function h(c)")
    s.add_argument("--c", type=_rationals, required=True)
    s.set_defaults(func=cmd_support)
    return p


def _text(obj, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.extend(_text(v, indent + 1))
        elif isinstance(v, list) and len(v) > 16:
            lines.append(f"{pad}{k}: [{', '.join(map(str, v[:16]))}, ... ({len(v)} items)]")
        else:
            lines.append(f"{pad}{k}: {v}")
    return lines


def render(payload: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, separators=(",", ":"))
    return "\n".join(_text(payload))


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        body, code = args.func(args)
    except ResourceLimitError as exc:
        body, code = {"command": args.command, "status": "resource_limit", "error": str(exc)}, EXIT_RESOURCE
    except ContractError as exc:
        body, code = {"command": args.command, "status": "internal_error", "error": str(exc)}, EXIT_INTERNAL
    except (DSPError, ValueError) as exc:
        body, code = {"command": args.command, "status": "input_error", "error": str(exc)}, EXIT_INPUT
    payload = {"schema": experiments.SCHEMA, **body}
    print(render(payload, args.format))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
