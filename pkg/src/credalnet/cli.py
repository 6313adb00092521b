"""Command line front end.

Exit codes: 0 on success (all reproduction checks pass, every Markov
verdict holds), 1 when a check or verdict fails, 2 on errors, which are
reported as a single ``ERROR <kind>: <detail>`` line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .core import JointDensity, conditional_bounds, format_rat, parse_rat
from .errors import CredalError
from .fileformat import parse_network
from .graph import d_separated
from .independence import markov_condition, strong_markov_probe
from .natext import TwoVarSpec, independent_natural_extension_2
from .network import add_vertex, strong_extension

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(CredalError):
    kind = "UsageError"


def _names(values):
    """Accept ``--x A B`` as well as ``--x A,B``."""
    out = []
    for v in values or ():
        out.extend(s for s in v.split(",") if s)
    return out


def _assignment(values):
    out = {}
    for item in _names(values):
        if "=" not in item:
            raise UsageError(f"expected VAR=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def _interval(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected lo,hi, got {text!r}")
    return tuple(parse_rat(p) for p in parts)


def _vector(points) -> str:
    return "[" + ", ".join(format_rat(x) for x in points) + "]"


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def _check_assignment(net, event):
    for k, v in event.items():
        if k not in net.by_name:
            raise UsageError(f"unknown variable {k!r}")
        if v not in net.by_name[k].values:
            raise UsageError(f"{v!r} is not a value of {k}")


def cmd_dsep(args, out):
    net = _load(args.file)
    verdict = d_separated(net.dag, _names(args.x), _names(args.y), _names(args.given))
    print("true" if verdict else "false", file=out)
    return EXIT_OK


def cmd_query(args, out):
    net = _load(args.file)
    target, evidence = _assignment(args.target), _assignment(args.evidence)
    _check_assignment(net, target)
    _check_assignment(net, evidence)
    K = strong_extension(net, limit=args.limit, reduce=not args.no_reduce)
    lo, hi = conditional_bounds(K, target, evidence)
    print(format_rat(lo if args.bound == "lower" else hi), file=out)
    return EXIT_OK


def cmd_extension(args, out):
    net = _load(args.file)
    K = strong_extension(net, limit=args.limit, reduce=not args.no_reduce)
    print(f"selections {net.selection_count()}", file=out)
    print(f"vertices {len(K)}", file=out)
    if args.enumerate:
        print("scope " + " ".join(net.names), file=out)
        for v in K.vertices:
            print(_vector(v.table), file=out)
    return EXIT_OK


def _describe(verdict) -> str:
    if verdict.holds:
        return "holds (vacuous)" if verdict.vacuous else "holds"
    cx = verdict.counterexample
    parts = []
    if cx.given:
        parts.append("given " + ",".join(f"{k}={v}" for k, v in cx.given.items()))
    if cx.extra:
        parts.append("with " + ",".join(f"{k}={v}" for k, v in cx.extra.items()))
    if cx.target and cx.values:
        ev = ",".join(f"{k}={v}" for k, v in cx.target.items())
        parts.append(f"{cx.bound} p({ev}) {format_rat(cx.values[0])} vs {format_rat(cx.values[1])}")
    if cx.witness is not None:
        parts.append("witness " + _vector(cx.witness))
    return "fails" + (": " + "; ".join(parts) if parts else "")


def cmd_check(args, out):
    net = _load(args.file)
    K = strong_extension(net, limit=args.limit)
    for text in args.add_vertex or ():
        K = add_vertex(K, JointDensity(net.scope, [parse_rat(x) for x in text.split(",")]))
    verdicts = markov_condition(net, K, args.notion)
    ok = True
    for n, v in verdicts.items():
        print(f"{n}: {_describe(v)}", file=out)
        ok = ok and v.holds
    if args.probe is not None:
        pv = strong_markov_probe(net, K, budget=args.probe, seed=args.seed)
        if pv.holds:
            print(f"strong-markov: {pv.notes['result']} ({pv.notes['steps']} steps)", file=out)
        else:
            d = pv.counterexample.detail
            print(f"strong-markov: violated at {d['node']} after {len(d['sequence'])} belief change(s)", file=out)
            ok = False
    return EXIT_OK if ok else EXIT_FAIL


def cmd_natext2(args, out):
    K = independent_natural_extension_2(TwoVarSpec(_interval(args.px), _interval(args.py)))
    print("scope X Y", file=out)
    for v in K.vertices:
        print(_vector(v.table), file=out)
    return EXIT_OK


def cmd_repro(args, out):
    from .repro import REPRODUCTIONS

    names = list(REPRODUCTIONS) if args.name == "all" else [args.name]
    ok = True
    for name in names:
        for check in REPRODUCTIONS[name]():
            print(f"{name}: {check.line()}", file=out)
            ok = ok and check.passed
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="credalnet", description="Exact inference and independence checks for credal networks.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("dsep", help="d-separation test on the network graph")
    s.add_argument("file")
    s.add_argument("--x", nargs="+", required=True)
    s.add_argument("--y", nargs="+", required=True)
    s.add_argument("--given", nargs="*", default=[])
    s.set_defaults(run=cmd_dsep)

    def extension_flags(s):
        s.add_argument("--no-reduce", action="store_true", help="keep every product density")
        s.add_argument("--limit", type=int, default=None, help="maximum number of selections")

    s = sub.add_parser("query", help="lower or upper conditional probability over the strong extension")
    s.add_argument("file")
    s.add_argument("--target", nargs="+", required=True, metavar="VAR=value")
    s.add_argument("--evidence", nargs="*", default=[], metavar="VAR=value")
    s.add_argument("--bound", choices=("lower", "upper"), default="lower")
    extension_flags(s)
    s.set_defaults(run=cmd_query)

    s = sub.add_parser("extension", help="size and vertices of the strong extension")
    s.add_argument("file")
    s.add_argument("--enumerate", action="store_true")
    extension_flags(s)
    s.set_defaults(run=cmd_extension)

    s = sub.add_parser("check", help="Markov condition verdicts on the strong extension")
    s.add_argument("file")
    s.add_argument("--notion", choices=("epistemic", "strong"), default="epistemic")
    s.add_argument("--add-vertex", action="append", metavar="P1,P2,...",
                   help="extra joint density (network node order) added before checking")
    s.add_argument("--probe", type=int, default=None, metavar="BUDGET", help="run the belief-change probe")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--limit", type=int, default=None)
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("natext2", help="independent natural extension of two binary variables")
    s.add_argument("--px", required=True, metavar="LO,HI")
    s.add_argument("--py", required=True, metavar="LO,HI")
    s.set_defaults(run=cmd_natext2)

    s = sub.add_parser("repro", help="recompute the worked examples and print PASS/FAIL lines")
    s.add_argument("name", choices=("example1", "example2", "example3", "table1", "all"))
    s.set_defaults(run=cmd_repro)
    return p


def main(argv: Sequence[str] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, out)
    except CredalError as exc:
        print(f"ERROR {exc.kind}: {exc}", file=err)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        kind = "FileError" if isinstance(exc, OSError) else "InputError"
        detail = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"ERROR {kind}: {detail}", file=err)
    return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
