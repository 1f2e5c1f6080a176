"""Command-line front end.

Exit codes: 0 on success or equality, 1 on inequality or when a relation
is outside the family a map requires, 2 on usage and parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from porel import bijections
from porel.dot import to_dot
from porel.enumeration import CountReport, all_posets
from porel.errors import LimitExceeded, NotInFamily, ParseError, PartitionViolation, PosetError
from porel.families import FamilyKind, FamilySpec, enumerate_family, verify_partition
from porel.poset import Poset, SplitContext, preset
from porel.textio import format_map, format_poset, format_posets, format_inline, parse_map, parse_poset
from porel.verify import check_sigma, sweep, theorem_count_check, x_labels


class UsageError(Exception):
    pass


def load_relation(arg: str) -> Poset:
    """A preset name (``chain2``, ``lambda``, ...) or a path to a stanza file ('-' for stdin)."""
    if arg == "-":
        return parse_poset(sys.stdin.read())
    path = Path(arg)
    if path.exists() and not path.is_dir():
        return parse_poset(path.read_text())
    try:
        return preset(arg)
    except KeyError:
        raise UsageError(f"{arg!r} is neither a file nor a preset (empty, antichain<k>, chain<k>, lambda, vee)") from None


def parse_labels(arg: str | None) -> tuple[str, ...]:
    if arg is None:
        return ()
    return tuple(a.strip() for a in arg.split(",") if a.strip())


def parse_lower(arg: str | None) -> tuple[str, ...]:
    """``3`` means x1 x2 x3; anything else is a comma-separated label list."""
    if arg is not None and arg.strip().isdigit():
        return x_labels(int(arg))
    return parse_labels(arg)


def _read_text(arg: str) -> str:
    return sys.stdin.read() if arg == "-" else Path(arg).read_text()


def _multiplicities(classes) -> str:
    return " ".join(str(v) for v in CountReport.multiplicities(classes))


def render_count(report: CountReport) -> str:
    p = report.params
    lines = [
        f"Q: {p['Q']}",
        f"X: {' '.join(p['X'])}",
        f"apex: {p['apex']}",
        f"lhs (max-condition side, with apex): {report.lhs_count}",
        f"rhs (dual anchor induced): {report.rhs_count}",
        f"equal: {'yes' if report.equal else 'NO'}",
    ]
    if report.lhs_classes or report.rhs_classes:
        lines.append(f"classes lhs: {len(report.lhs_classes)} (multiplicities {_multiplicities(report.lhs_classes)})")
        lines.append(f"classes rhs: {len(report.rhs_classes)} (multiplicities {_multiplicities(report.rhs_classes)})")
    if report.block_table:
        lines.append("blocks:")
        width = max(len(format_inline(b.anchor)) for b in report.block_table)
        lines.append(f"  {'G':<{width}}  {'lhs':>5}  {'rhs':>5}")
        for b in report.block_table:
            lines.append(f"  {format_inline(b.anchor):<{width}}  {b.lhs:>5}  {b.rhs:>5}")
    return "\n".join(lines) + "\n"


def _json_line(command: str, report: CountReport) -> str:
    d = report.to_dict()
    d["command"] = command
    return json.dumps(d, sort_keys=True)


def cmd_count(args) -> int:
    Q = load_relation(args.Q)
    report = theorem_count_check(Q, parse_lower(args.X), args.apex, classes=not args.no_classes)
    if args.json:
        print(_json_line("count", report))
    else:
        sys.stdout.write(render_count(report))
    return 0 if report.equal else 1


def cmd_enumerate(args) -> int:
    X = parse_lower(args.X)
    if args.family is None:
        members = list(all_posets(X))
    else:
        Q = load_relation(args.Q) if args.Q else None
        upper = Q.labels if Q is not None else parse_labels(args.upper)
        spec = FamilySpec(FamilyKind(args.family), SplitContext(X, upper, args.apex), Q)
        members = enumerate_family(spec)
    if args.count:
        print(len(members))
    elif members and not isinstance(members[0], Poset):
        sys.stdout.write("\n".join(format_map(f) for f in members))
    else:
        sys.stdout.write(format_posets(members))
    return 0


def _context(R: Poset, args, apex=None) -> SplitContext:
    if args.upper is None:
        raise UsageError(f"map {args.verb} needs --upper")
    return SplitContext.split(R, parse_labels(args.upper), apex)


def cmd_map(args) -> int:
    verb = args.verb
    if verb == "phi":
        if not args.Q:
            raise UsageError("map phi needs --Q for the anchor relation")
        f = parse_map(_read_text(args.input))
        out = bijections.phi(f, load_relation(args.Q))
        sys.stdout.write(format_poset(out))
        return 0
    R = parse_poset(_read_text(args.input))
    if verb == "tau":
        out = bijections.tau(R, _context(R, args))
        if args.check:
            bijections.tau(out, _context(out, args))
    elif verb == "phi-inverse":
        f = bijections.phi_inverse(R, _context(R, args))
        sys.stdout.write(format_map(f))
        return 0
    else:
        if args.apex is None:
            raise UsageError(f"map {verb} needs --apex")
        inverse = verb.endswith("-inverse")
        if inverse:
            plain = _context(R, args)
            ctx = SplitContext(plain.lower_part, plain.upper_part, args.apex)
        else:
            ctx = _context(R, args, args.apex)
        fn = {
            "sigma": bijections.sigma,
            "sigma-inverse": bijections.sigma_inverse,
            "sigma-blockwise": bijections.sigma_blockwise,
            "sigma-blockwise-inverse": bijections.sigma_blockwise_inverse,
        }[verb]
        out = fn(R, ctx, check=args.check)
    sys.stdout.write(format_poset(out))
    return 0


def cmd_verify(args) -> int:
    ok = True
    if args.what == "theorem":
        for Q, X in sweep(args.maxZ, args.maxX):
            report = theorem_count_check(Q, X, args.apex, classes=args.classes, blocks=True)
            ok &= report.equal
            if args.json:
                print(_json_line("verify theorem", report))
            else:
                print(f"{format_inline(Q):<48} |X|={len(X)}  lhs={report.lhs_count:<6} rhs={report.rhs_count:<6} "
                      f"blocks={len(report.block_table):<4} {'ok' if report.equal else 'MISMATCH'}")
    elif args.what == "partition":
        for Q, X in sweep(args.maxZ, args.maxX):
            for which in ("c", "mstar"):
                try:
                    report = verify_partition(Q, X, which)
                except PartitionViolation as exc:
                    ok = False
                    print(f"{format_inline(Q):<48} |X|={len(X)}  {which:<5} FAIL: {exc}")
                    continue
                if args.json:
                    print(report.to_json())
                else:
                    print(f"{format_inline(Q):<48} |X|={len(X)}  {which:<5} total={report.total:<6} blocks={len(report.blocks)} ok")
    else:
        for Q, X in sweep(args.maxZ, args.maxX):
            res = check_sigma(Q, X, args.apex)
            ok &= res.ok
            line = {"command": "verify sigma", "Q": format_inline(Q), "X": list(X), "domain": res.domain,
                    "codomain": res.codomain, "blocks": res.blocks, "ok": res.ok, "failures": res.failures[:3]}
            if args.json:
                print(json.dumps(line, sort_keys=True))
            else:
                print(f"{format_inline(Q):<48} |X|={len(X)}  domain={res.domain:<6} codomain={res.codomain:<6} "
                      f"{'ok' if res.ok else 'FAIL: ' + res.failures[0]}")
    return 0 if ok else 1


def cmd_export_dot(args) -> int:
    R = parse_poset(_read_text(args.input))
    sys.stdout.write(to_dot(R, upper=parse_labels(args.upper), lower=parse_labels(args.lower), apex=args.apex))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="porel", description="Finite partial orders, the sigma bijection and its counting identity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="count both sides of the identity for one anchor Q and lower part X")
    p.add_argument("--Q", required=True, help="anchor relation: preset name or stanza file")
    p.add_argument("--X", default="0", help="number of lower elements, or comma-separated labels")
    p.add_argument("--apex", default="y")
    p.add_argument("--json", action="store_true", help="emit one JSON line instead of a table")
    p.add_argument("--no-classes", action="store_true", help="skip isomorphism-class tallies")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("enumerate", help="list all relations on X, or all members of a family")
    p.add_argument("--family", choices=[k.value for k in FamilyKind])
    p.add_argument("--Q", help="anchor relation (required for every family but u)")
    p.add_argument("--upper", "--Y", dest="upper", help="upper labels for family u")
    p.add_argument("--X", default="0")
    p.add_argument("--apex")
    p.add_argument("--count", action="store_true", help="print only the number of members")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("map", help="apply one of the maps to a relation file")
    p.add_argument("verb", choices=["tau", "phi", "phi-inverse", "sigma", "sigma-inverse", "sigma-blockwise", "sigma-blockwise-inverse"])
    p.add_argument("input", help="stanza file, or - for stdin")
    p.add_argument("--upper", "--Y", "--Z", dest="upper", help="comma-separated upper labels (Y for tau/phi-inverse, Z for sigma)")
    p.add_argument("--apex")
    p.add_argument("--Q", help="anchor relation for map phi")
    p.add_argument("--check", action="store_true", help="re-validate that the image lies in the target family")
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("verify", help="exhaustive sweeps over all labeled anchors")
    p.add_argument("what", choices=["theorem", "partition", "sigma"])
    p.add_argument("--maxZ", type=int, default=3)
    p.add_argument("--maxX", type=int, default=2)
    p.add_argument("--apex", default="y")
    p.add_argument("--classes", action="store_true", help="also tally isomorphism classes (theorem only)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("export-dot", help="Hasse diagram as Graphviz DOT")
    p.add_argument("input", help="stanza file, or - for stdin")
    p.add_argument("--upper", "--Z", dest="upper", help="labels drawn as black dots")
    p.add_argument("--lower", "--X", dest="lower", help="labels drawn as small circles")
    p.add_argument("--apex", help="label drawn as a hollow diamond")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotInFamily as exc:
        print(f"error: not in family: {exc}", file=sys.stderr)
        return 1
    except (UsageError, ParseError, LimitExceeded, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PosetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
