"""Command-line front end: ``unionclosed <subcommand> ...``.

Exit status is 0 on success, 1 when a verification check fails, and 2 for
usage, parse, or parameter errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time

from . import __version__
from .closure import close
from .constructions import Kind, build, counterexample_pair
from .harness import CLAIMS, run_claim, run_header
from .orders import OrderKind, initial_segment, rank
from .search import SearchConfig, f_min
from .setcore import (DomainError, FamilyParseError, format_family, format_set, labels_of,
                      mask_of, parse_family)
from .shadows import (UniformFamily, complement_transform, delta_proportion,
                      kk_min_upper_shadow, lower_shadow, total_upper_shadow, upper_shadow)

WORKERS_ENV = "UNIONCLOSED_WORKERS"


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(args, payload: dict, plain_lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2, sort_keys=False))
    else:
        print("\n".join(plain_lines))


def cmd_closure(args) -> int:
    fam = parse_family(_read_text(args.file))
    cl = close(fam)
    members = cl.sorted_members()
    if args.members:
        sys.stdout.write(f"# closure size {len(members)}\n")
        sys.stdout.write(format_family(members))
        return 0
    _emit(args, {"n": fam.n, "k": fam.k, "size": len(members)},
          [f"size {len(members)}"])
    return 0


def cmd_order(args) -> int:
    kind = OrderKind.parse(args.kind)
    if args.rank:
        a = mask_of(args.rank)
        r = rank(kind, a, args.universe)
        _emit(args, {"order": kind.value, "set": labels_of(a), "rank": r}, [str(r)])
        return 0
    if args.k is None or args.n is None:
        raise DomainError("order needs --k and --n (or --rank)")
    fam = initial_segment(kind, args.k, args.n, args.universe)
    sys.stdout.write(f"# {kind.value} initial segment k={args.k} n={args.n}\n")
    sys.stdout.write(format_family(fam))
    return 0


def cmd_shadow(args) -> int:
    op = args.op
    if op == "kkmin":
        if args.m is None or args.r is None or args.universe is None:
            raise DomainError("kkmin needs --m, --r and --universe")
        v = kk_min_upper_shadow(args.m, args.r, args.universe)
        _emit(args, {"op": op, "m": args.m, "r": args.r, "p": args.universe, "count": v},
              [str(v)])
        return 0
    if op == "delta":
        if args.s is None or args.k is None or args.t is None:
            raise DomainError("delta needs --s, --k and --t")
        d = delta_proportion(args.s, args.k, args.t)
        _emit(args, {"op": op, "s": args.s, "k": args.k, "t": args.t,
                     "numerator": d.numerator, "denominator": d.denominator},
              [f"{d.numerator}/{d.denominator}"])
        return 0
    if args.file is None:
        raise DomainError(f"{op} needs a family file")
    fam = parse_family(_read_text(args.file))
    p = args.universe if args.universe is not None else fam.ground.bit_length() - 1
    uf = UniformFamily(fam.sets, fam.k, p)
    if op == "total":
        count, listed = total_upper_shadow(uf, materialize=args.members)
        if args.members:
            sys.stdout.write(f"# total upper shadow in [{p}]: {count}\n")
            sys.stdout.write("".join((" ".join(map(str, labels_of(m))) or "") + "\n"
                                     for m in listed))
            return 0
        _emit(args, {"op": op, "p": p, "count": count}, [str(count)])
        return 0
    if op == "lower":
        out = lower_shadow(uf)
    elif op == "upper":
        out = upper_shadow(uf, args.times)
    else:
        out = complement_transform(uf)
    members = out.sorted_members()
    if args.format == "json":
        print(json.dumps({"op": op, "p": p, "r": out.r, "count": len(members),
                          "members": [labels_of(m) for m in members]}, indent=2))
    else:
        label = "complement" if op == "complement" else f"{op} shadow"
        sys.stdout.write(f"# {label} in [{p}]: {len(members)} sets\n")
        sys.stdout.write(format_family(members))
    return 0


def cmd_construct(args) -> int:
    if args.kind == "counterexample":
        a, b = counterexample_pair()
        record = {"kind": "counterexample", "params": {},
                  "predicted_size": [12, 13]}
        text = format_family(a) if not args.second else format_family(b)
    else:
        c = build(Kind(args.kind), t=args.t, k=args.k, n=args.n, l=args.l)
        record = c.record()
        text = format_family(c.family)
    header = "# construct " + json.dumps(record) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(header + text)
    else:
        sys.stdout.write(header + text)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(record, fh, indent=2)
    return 0


def _seed_arg(value: str):
    if value in ("maxlex", "colex"):
        return value
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("seed must be maxlex, colex or an integer") from None


def cmd_fmin(args) -> int:
    cfg = SearchConfig(
        n=args.n, k=args.k, ground_cap=args.ground_cap, upper_bound_seed=args.seed_bound,
        parallel_width=args.workers, checkpoint_path=args.checkpoint,
        node_budget=args.budget, prune_bound=not args.no_bound,
        prune_lemma3=not args.no_lemma3, prune_canonicity=not args.no_canonicity,
        canon_interval=args.canon_interval, max_witnesses=args.max_witnesses,
    )
    t0 = time.perf_counter()
    out = f_min(cfg)
    payload = out.to_json()
    payload["wall_time"] = round(time.perf_counter() - t0, 4)
    lines = [
        f"f({out.n},{out.k}) = {out.minimum}" + ("" if out.complete else " (INCOMPLETE)"),
        f"witness classes {out.witness_count}" + (" (truncated)" if out.witnesses_truncated else ""),
        f"nodes {out.nodes_explored} pruned: bound {out.pruned_by_bound}, "
        f"canonicity {out.pruned_by_canonicity}, lemma3 {out.pruned_by_lemma3}",
        f"ground cap {out.ground_cap}, seed {out.seed_value}",
    ]
    for w in out.witnesses:
        lines.append("  " + " ".join(format_set(s) for s in w.sets))
    _emit(args, payload, lines)
    return 0


def cmd_verify(args) -> int:
    t0 = time.time()
    reports = run_claim(args.claim, n_max=args.n_max, k=args.k, t=args.t,
                        trials=args.trials, seed=args.seed, workers=args.workers,
                        t_max=args.t_max, k_max=args.k_max)
    header = run_header(args.seed)
    header["claim"] = args.claim
    header["wall_time"] = round(time.time() - t0, 4)
    doc = {"header": header, "reports": [r.to_json() for r in reports]}
    if args.report:
        with open(args.report, "w") as fh:
            json.dump(doc, fh, indent=2)
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(f"# seed {args.seed}")
        for r in reports:
            print(r.line() + (f"  [{r.notes}]" if r.notes else ""))
    return 0 if all(r.passed for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unionclosed",
        description="Union-closed families generated by k-sets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["plain", "json"], default="plain",
                       help="output style (default plain)")

    p = sub.add_parser("closure", help="size (or members) of the generated family")
    p.add_argument("file", help="family file, one set per line ('-' for stdin)")
    p.add_argument("--members", action="store_true", help="list every member of the closure")
    fmt(p)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("order", help="initial segments and ranks in colex/lex/max-lex")
    p.add_argument("--kind", required=True, choices=[o.value for o in OrderKind])
    p.add_argument("--k", type=int, help="set size")
    p.add_argument("--n", type=int, help="segment length")
    p.add_argument("--universe", type=int, help="finite universe [p]; required for lex")
    p.add_argument("--rank", type=int, nargs="+", metavar="LABEL",
                   help="print the 0-based rank of this set instead of a segment")
    fmt(p)
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("shadow", help="shadows, complement map, KK minimum, delta")
    p.add_argument("file", nargs="?", help="uniform family file ('-' for stdin)")
    p.add_argument("--op", required=True,
                   choices=["lower", "upper", "total", "complement", "kkmin", "delta"])
    p.add_argument("--universe", type=int, help="universe [p]; defaults to the largest label")
    p.add_argument("--times", type=int, default=1, help="iterations of the upper shadow")
    p.add_argument("--members", action="store_true", help="list the total upper shadow")
    p.add_argument("--m", type=int, help="segment length for kkmin")
    p.add_argument("--r", type=int, help="set size for kkmin")
    p.add_argument("--s", type=int, help="segment length for delta")
    p.add_argument("--k", type=int, help="k for delta (segment of (k-1)-sets)")
    p.add_argument("--t", type=int, help="universe [t] for delta")
    fmt(p)
    p.set_defaults(func=cmd_shadow)

    p = sub.add_parser("construct", help="emit an extremal construction as a family file")
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in Kind] + ["counterexample"])
    p.add_argument("--t", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--second", action="store_true",
                   help="for counterexample: emit the colex family instead")
    p.add_argument("--out", help="write the family here instead of stdout")
    p.add_argument("--json", help="also write the {kind, params, predicted_size} record here")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("fmin", help="exact f(n,k) by exhaustive canonical search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ground-cap", type=int, help="hard cap on the ground set size")
    p.add_argument("--seed-bound", type=_seed_arg, default="maxlex",
                   help="initial upper bound: maxlex, colex, or an integer")
    p.add_argument("--budget", type=int, help="abort after this many search nodes")
    p.add_argument("--checkpoint", help="checkpoint file to resume from and update")
    p.add_argument("--workers", type=int, default=_default_workers(),
                   help=f"worker processes (default ${WORKERS_ENV} or 1)")
    p.add_argument("--no-bound", action="store_true", help="disable closure-size pruning")
    p.add_argument("--no-lemma3", action="store_true", help="disable ground-size pruning")
    p.add_argument("--no-canonicity", action="store_true", help="disable isomorph rejection")
    p.add_argument("--canon-interval", type=int, default=1,
                   help="check canonicity every this many levels")
    p.add_argument("--max-witnesses", type=int, default=64)
    p.add_argument("--format", choices=["plain", "json"], default="json",
                   help="output style (default json)")
    p.set_defaults(func=cmd_fmin)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("claim", choices=list(CLAIMS) + ["all"])
    p.add_argument("--n-max", type=int, help="largest n (theorem2, conj8)")
    p.add_argument("--k", type=int, help="k (conj7, conj8, prop9)")
    p.add_argument("--t", type=int, help="t (conj7)")
    p.add_argument("--trials", type=int, help="random trials (lemmas, kk)")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.add_argument("--t-max", type=int, help="largest t (constructions)")
    p.add_argument("--k-max", type=int, help="largest k (constructions)")
    p.add_argument("--workers", type=int, default=_default_workers())
    p.add_argument("--report", help="write the JSON report file here")
    fmt(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FamilyParseError as exc:
        print(f"unionclosed: parse error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, OSError) as exc:
        print(f"unionclosed: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
