"""Command-line front end.

Every subcommand prints one JSON document on stdout (keys sorted, big
integers as strings) unless ``--text`` asks for a plain rendering.  Exit
status: 0 on success, 2 for unparsable input, 3 for a violated
precondition, 4 for an internal inconsistency.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import classify as cl
from .diagram import StringLinkDiagram, braid_to_diagram, parse_braid
from .errors import BraidParseError, InconsistencyError, PreconditionError
from .milnor import mu, mu_table, parse_sequence

EXIT_PARSE, EXIT_PRECONDITION, EXIT_INCONSISTENCY = 2, 3, 4


def load_diagram(source: str) -> StringLinkDiagram:
    """A braid string (``m=3: s1 s2^-1 ...``) or the path of a diagram JSON file."""
    if source.lstrip().startswith("m="):
        return braid_to_diagram(parse_braid(source))
    path = Path(source)
    if not path.exists():
        raise BraidParseError(f"{source!r} is neither a braid nor an existing file")
    try:
        return StringLinkDiagram.from_json(json.loads(path.read_text()))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise BraidParseError(f"cannot read diagram JSON from {source}: {exc}") from None


def _input(args) -> StringLinkDiagram:
    if getattr(args, "diagram", None):
        return load_diagram(args.diagram)
    return load_diagram(args.braid)


def _seq(seq) -> str:
    return "".join(map(str, seq)) if all(x < 10 for x in seq) else ",".join(map(str, seq))


# ---------------------------------------------------------------------------
# subcommands: each returns (json payload, text lines)


def cmd_mu(args):
    d = _input(args)
    value = mu(d, parse_sequence(args.seq))
    return {"mu": str(value)}, [f"mu({args.seq}) = {value}"]


def cmd_table(args):
    d = _input(args)
    t = mu_table(d, args.max_len, non_repeated_only=args.non_repeated)
    payload = {"m": t.component_count, "max_length": t.max_length,
               "non_repeated": t.non_repeated_only, "entries": t.to_json()}
    lines = [f"mu({_seq(s)}) = {v}" for s, v in
             sorted(t.entries.items(), key=lambda kv: (len(kv[0]), kv[0])) if len(s) > 1]
    return payload, lines


def cmd_classify(args):
    a, b = load_diagram(args.a), load_diagram(args.b)
    verdict = cl.equivalent_2n_lh(a, b, args.n)
    payload = {"equivalent": verdict.equivalent}
    if verdict.witness is not None:
        payload["witness"] = list(verdict.witness)
    text = "equivalent" if verdict else f"not equivalent (mu({_seq(verdict.witness)}) differs mod {args.n})"
    return payload, [text]


def cmd_canonical(args):
    f = cl.canonical_form(_input(args), args.n)
    return f.to_json(), [f"{_seq(p)}: {y}" for p, y in f.exponents]


def cmd_group(args):
    order = cl.group_order(args.m, args.n)
    payload = {"order": str(order), "s_m": cl.s_value(args.m)}
    lines = [f"order {order} = {args.n}^{cl.s_value(args.m)}"]
    if args.enumerate:
        elements = list(cl.enumerate_group(args.m, args.n))
        payload["elements"] = [f.to_json()["exponents"] for f in elements]
        lines += [" ".join(f"{_seq(p)}:{y}" for p, y in f.exponents) for f in elements]
    return payload, lines


def cmd_link_trivial(args):
    ok, report = cl.link_trivial_2n_lh(_input(args), args.n)
    failures = report.failures()
    payload = {"trivial": ok,
               "failures": [{"sequence": list(s), "delta": str(dn), "mu_bar": str(mb)}
                            for s, (dn, mb, _) in sorted(failures.items())],
               "report": report.to_json()}
    lines = ["trivial" if ok else "not trivial"]
    lines += [f"  {_seq(s)}: Delta^({args.n}) = {dn}, mu-bar = {mb}"
              for s, (dn, mb, _) in sorted(failures.items())]
    return payload, lines


# ---------------------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milnorsl",
        description="Milnor invariants and (2n+lh)-classification of string links.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        fmt = p.add_mutually_exclusive_group()
        fmt.add_argument("--json", dest="text", action="store_false",
                         help="JSON output (the default)")
        fmt.add_argument("--text", dest="text", action="store_true",
                         help="human-readable output")
        p.set_defaults(text=False)

    def source(p, required=True):
        g = p.add_mutually_exclusive_group(required=required)
        g.add_argument("--braid", help='pure braid, e.g. "m=2: s1^4"')
        g.add_argument("--diagram", help="path of a diagram JSON file")

    p = sub.add_parser("mu", help="one mu-invariant")
    source(p)
    p.add_argument("--seq", required=True, help='index sequence, e.g. 112 or "1,1,2"')
    common(p)
    p.set_defaults(func=cmd_mu)

    p = sub.add_parser("table", help="all mu-invariants up to a length")
    source(p)
    p.add_argument("--max-len", type=_positive, required=True)
    p.add_argument("--non-repeated", action="store_true",
                   help="only sequences without repeated indices")
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("classify", help="decide (2n+lh)-equivalence of two string links")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--a", required=True, help="braid string or diagram JSON path")
    p.add_argument("--b", required=True, help="braid string or diagram JSON path")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("canonical", help="canonical form of a (2n+lh)-class")
    p.add_argument("--n", type=_positive, required=True)
    source(p)
    common(p)
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("group", help="the group of (2n+lh)-classes")
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--n", type=_positive, required=True)
    what = p.add_mutually_exclusive_group()
    what.add_argument("--order", action="store_true", help="print the order (default)")
    what.add_argument("--enumerate", action="store_true",
                      help="list every class (only for order <= 10^4)")
    common(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("link-trivial", help="is the closure (2n+lh)-trivial?")
    p.add_argument("--n", type=_positive, required=True)
    source(p)
    common(p)
    p.set_defaults(func=cmd_link_trivial)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with status 2 on bad usage
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        payload, lines = args.func(args)
    except BraidParseError as exc:
        print(f"milnorsl: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"milnorsl: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InconsistencyError as exc:
        print(f"milnorsl: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENCY
    if args.text:
        print("\n".join(lines))
    else:
        print(json.dumps(payload, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
