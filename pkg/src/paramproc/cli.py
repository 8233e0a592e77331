"""Command-line front end.

Exit codes: 0 equivalent (or pass), 1 inequivalent (or fail), 2 unknown,
3 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import hoterm as H
from . import pi as P
from . import repro
from .config import ExploreConfig
from .correspondence import ExhaustiveDepth, RandomShape, check, generate_corpus
from .encoder import encode
from .equivalence import (context_probe, ground_bisim, image_probe, local_bisim_bounded,
                          normal_bisim, trigger_contexts)
from .factorization import ContextHole, FactorizationError, clause, factorize
from .holts import HoSemantics
from .pilts import PiSemantics
from .syntax import ParseError, parse, show
from .verdict import Result, Verdict

EXIT = {Result.EQUIVALENT: 0, Result.INEQUIVALENT: 1, Result.UNKNOWN: 2}
USAGE = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE, f"{self.prog}: error: {message}\n")


def _add_terms(sp: argparse.ArgumentParser, calculus: str = "pi"):
    sp.add_argument("files", nargs="*", help="files holding one term each")
    sp.add_argument("-e", dest="inline", action="append", default=[], metavar="TERM",
                    help="inline term (repeatable; replaces files)")
    sp.add_argument("--calculus", choices=["pi", "hopi"], default=calculus)


def _texts(args, count: int | None = None) -> list[str]:
    if args.inline and args.files:
        raise UsageError("give terms either inline with -e or as files, not both")
    texts = args.inline or [Path(f).read_text() for f in args.files]
    if count is not None and len(texts) != count:
        raise UsageError(f"expected {count} term(s), got {len(texts)}")
    return texts


def _terms(args, count: int | None = None):
    return [parse(t.strip(), args.calculus) for t in _texts(args, count)]


def _ho_terms(args, count: int):
    """Higher-order terms; first-order input is translated."""
    terms = _terms(args, count)
    return [encode(t) for t in terms] if args.calculus == "pi" else terms


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="paramproc", description="pi and higher-order process workbench")
    ap.add_argument("--records", action="store_true", help="line-oriented record output")
    ap.add_argument("--max-states", type=int, default=20_000)
    ap.add_argument("--max-tau-depth", type=int, default=32)
    ap.add_argument("--max-trace-len", type=int, default=4)
    ap.add_argument("-k", "--fresh-inputs", type=int, default=1,
                    help="fresh names offered to inputs")
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("parse", help="parse and pretty-print terms")
    _add_terms(sp)

    sp = sub.add_parser("trace", help="render the transition tree")
    _add_terms(sp)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--follow", choices=["all", "tau"], default="all")

    sp = sub.add_parser("encode", help="translate pi terms")
    _add_terms(sp)

    sp = sub.add_parser("factorize", help="factorize E[A]: give the context, then the payload")
    _add_terms(sp, "hopi")
    sp.add_argument("--hole", default="X")
    sp.add_argument("-m", default="m", help="fresh forwarder name")
    sp.add_argument("--verify", action="store_true", help="also compare with E[A]")

    sp = sub.add_parser("check", help="compare two terms")
    sp.add_argument("relation", choices=["ground", "normal", "context", "local"])
    _add_terms(sp)
    sp.add_argument("--strong", action="store_true")
    sp.add_argument("--image", action="store_true",
                    help="context: translated first-order contexts (pi input only)")

    sp = sub.add_parser("correspond", help="check operational correspondence")
    _add_terms(sp)
    sp.add_argument("--weak", action="store_true")
    sp.add_argument("--depth", type=int, help="use the exhaustive corpus of this depth")

    sp = sub.add_parser("repro", help="run a canned worked example")
    sp.add_argument("example", choices=[*repro.EXAMPLES, "all"])

    sp = sub.add_parser("corpus", help="print a generated corpus")
    sp.add_argument("--depth", type=int, default=1, help="exhaustive depth")
    sp.add_argument("--random", type=int, metavar="N", help="N random terms instead")
    return ap


def _config(args) -> ExploreConfig:
    seed = args.seed
    if env := os.environ.get("HOPI_SEED"):
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"HOPI_SEED must be an integer, got {env!r}") from None
    try:
        return ExploreConfig(max_tau_depth=args.max_tau_depth, max_states=args.max_states,
                             fresh_inputs=args.fresh_inputs, max_trace_len=args.max_trace_len,
                             seed=seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _render_tree(sem, t, depth: int, tau_only: bool, out: list[str], indent: str = ""):
    if depth == 0:
        return
    seen = set()
    for lbl, u in sem.moves(t):
        if tau_only and not lbl.is_tau:
            continue
        key = (str(lbl), sem.key(u))
        if key in seen:
            continue
        seen.add(key)
        shown = show(H.normalize(u)) if isinstance(u, H.HoTerm) else show(u)
        out.append(f"{indent}--{lbl}--> {shown}")
        _render_tree(sem, u, depth - 1, tau_only, out, indent + "  ")


def _print_verdict(v: Verdict, records: bool):
    if records:
        print(v.to_records())
        return
    print(v.result.value + (" (bounded)" if v.bounded else ""))
    for s in v.witness:
        print(f"  {s.side}: {s.label}" + (f"  {s.term}" if s.term else ""))
    if v.bounds_hit:
        print("bounds hit: " + ", ".join(v.bounds_hit))


def cmd_parse(args, cfg) -> int:
    for t in _terms(args):
        print(show(t))
    return 0


def cmd_trace(args, cfg) -> int:
    for t in _terms(args):
        sem = PiSemantics(cfg) if isinstance(t, P.PiProcess) else HoSemantics(cfg)
        if isinstance(t, H.HoTerm):
            t = H.normalize(t)
        lines: list[str] = []
        _render_tree(sem, t, args.depth, args.follow == "tau", lines)
        print(show(t))
        for line in lines:
            print(line)
    return 0


def cmd_encode(args, cfg) -> int:
    if args.calculus != "pi":
        raise UsageError("encode takes pi terms")
    for t in _terms(args):
        print(show(encode(t)))
    return 0


def cmd_factorize(args, cfg) -> int:
    if args.calculus != "hopi":
        raise UsageError("factorize takes higher-order terms")
    ctx_text, payload_text = _texts(args, 2)
    e = ContextHole.parse(ctx_text.strip(), args.hole)
    a = parse(payload_text.strip(), "hopi")
    f = factorize(e, a, args.m)
    shape, kind = clause(e, a)
    if args.records:
        print(f"CLAUSE context={shape} payload={kind}")
        print(f"TERM {show(f)}")
    else:
        print(show(f))
    if not args.verify:
        return 0
    v = normal_bisim(e.fill(a), f, cfg)
    _print_verdict(v, args.records)
    return EXIT[v.result]


def cmd_check(args, cfg) -> int:
    match args.relation:
        case "ground" | "local":
            if args.calculus != "pi":
                raise UsageError(f"{args.relation} bisimulation compares pi terms")
            p, q = _terms(args, 2)
            fn = ground_bisim if args.relation == "ground" else local_bisim_bounded
            v = fn(p, q, cfg, "strong" if args.strong else "weak")
        case "normal":
            a, b = _ho_terms(args, 2)
            v = normal_bisim(a, b, cfg, strong=args.strong)
        case "context":
            if args.image:
                if args.calculus != "pi":
                    raise UsageError("--image needs pi terms")
                p, q = _terms(args, 2)
                v = image_probe(p, q, cfg)
            else:
                a, b = _ho_terms(args, 2)
                names = H.free_names(a) | H.free_names(b)
                v = context_probe(a, b, trigger_contexts(names), cfg, forward=True)
    _print_verdict(v, args.records)
    return EXIT[v.result]


def cmd_correspond(args, cfg) -> int:
    if args.calculus != "pi":
        raise UsageError("correspond takes pi terms")
    if args.depth is not None:
        if args.inline or args.files:
            raise UsageError("give either --depth or terms")
        terms = generate_corpus(cfg.seed, ExhaustiveDepth(args.depth))
    else:
        terms = _terms(args)
        if not terms:
            raise UsageError("no terms given")
    from .correspondence import CorrespondenceReport

    rep = CorrespondenceReport()
    for p in terms:
        rep.merge(check(p, cfg, args.weak))
    if args.records:
        print(rep.to_records())
    else:
        for direction in ("forward", "backward"):
            for c, t in rep.tallies(direction).items():
                print(f"{direction} clause {c}: {t.passed}/{t.checked} passed, "
                      f"{t.failed} failed, {t.unknown} unknown")
        for e in rep.exhibits:
            print(f"! {e.direction} clause {e.clause}: {e.source} --{e.transition}--> "
                  f"expected {e.expected}")
    return 1 if rep.failed else 2 if rep.unknown else 0


def cmd_repro(args, cfg) -> int:
    names = repro.EXAMPLES if args.example == "all" else (args.example,)
    ok = True
    for n in names:
        r = repro.run(n, cfg)
        ok &= r.passed
        if args.records:
            print(r.to_records())
        else:
            print(f"{n}: {'pass' if r.passed else 'FAIL'}")
            if not r.passed:
                for d in r.details:
                    print(f"  {d}")
    return 0 if ok else 1


def cmd_corpus(args, cfg) -> int:
    shape = RandomShape(args.random, args.depth) if args.random is not None else ExhaustiveDepth(args.depth)
    for i, p in enumerate(generate_corpus(cfg.seed, shape)):
        print(f"TERM {i} {show(p)}" if args.records else show(p))
    return 0


COMMANDS = {
    "parse": cmd_parse, "trace": cmd_trace, "encode": cmd_encode, "factorize": cmd_factorize,
    "check": cmd_check, "correspond": cmd_correspond, "repro": cmd_repro, "corpus": cmd_corpus,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, _config(args))
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
    except (UsageError, FactorizationError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return USAGE


if __name__ == "__main__":
    sys.exit(main())
