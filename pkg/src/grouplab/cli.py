"""Command-line front end.

Exit status: 0 for Verified or success, 1 for Refuted, 2 for Unknown and 3
for usage or input errors.  Errors print a single line to stderr.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import formats
from .autos import dehn_twist, generic_family, verify_automorphism
from .errors import GroupLabError
from .homdiagram import build_omega_sentence, check_strictness, evaluate_fundamental_sequence, validate_diagram
from .marked import convergence_table, distance_at_cutoff
from .ntq import check_nondegenerate, check_regular, compose_to_base, validate_structure
from .solver import find_solutions, format_assignment
from .splittings import HNNSplitting, enumerate_bass_serre
from .verdict import EXIT_CODES, Status, Verdict, combine
from .words import parse_word

USAGE_ERROR = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grouplab", description="Bounded computations with free groups, splittings and NTQ systems.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="list solutions of a system inside a ball")
    s.add_argument("file")
    s.add_argument("--radius", type=_nonneg, required=True)
    s.add_argument("--threads", type=_nonneg, default=1)

    s = sub.add_parser("twist", help="Dehn twist of a splitting along an edge element")
    s.add_argument("file")
    s.add_argument("--element", required=True)
    s.add_argument("--radius", type=_nonneg, default=2)

    s = sub.add_parser("genfam", help="enumerate a generic family of solutions")
    s.add_argument("file")
    s.add_argument("--n", type=_nonneg, required=True)
    s.add_argument("--maxexp", type=_nonneg, required=True)

    s = sub.add_parser("ntq", help="check an NTQ tower")
    s.add_argument("file")
    s.add_argument("--check", choices=["structure", "nondegenerate", "regular", "compose"], required=True)
    s.add_argument("--radius", type=_nonneg, default=2)

    s = sub.add_parser("diagram", help="validate, evaluate or check strictness of a Hom-diagram")
    s.add_argument("file")
    s.add_argument("--eval", metavar="CHOICES")
    s.add_argument("--strict", action="store_true")
    s.add_argument("--radius", type=_nonneg, default=2)

    s = sub.add_parser("omega", help="print the sentence for a pair of quotient records")
    s.add_argument("rec1")
    s.add_argument("rec2")

    s = sub.add_parser("bass-serre", help="enumerate part of the Bass-Serre tree of an HNN extension")
    s.add_argument("file")
    s.add_argument("--syllables", type=_nonneg, required=True)
    s.add_argument("--exp", type=_nonneg, required=True)
    s.add_argument("--replen", type=_nonneg, required=True)

    s = sub.add_parser("dist", help="distance between two markings at a cutoff")
    s.add_argument("m1")
    s.add_argument("m2")
    s.add_argument("--cutoff", type=_nonneg, required=True)

    s = sub.add_parser("converge", help="kernel-ball stabilization for a sequence of markings")
    s.add_argument("files", nargs="+")
    s.add_argument("--cutoff", type=_nonneg, required=True)
    return p


def _print_verdict(label: str, v: Verdict, out) -> None:
    print(f"{label}: {v}", file=out)


def cmd_solve(args, out) -> int:
    system = formats.read_system(args.file)
    sols = find_solutions(system, args.radius, threads=max(args.threads, 1))
    for s in sols:
        print(format_assignment(s), file=out)
    print(f"TOTAL {len(sols)}", file=out)
    return 0 if sols else EXIT_CODES[Status.UNKNOWN]


def cmd_twist(args, out) -> int:
    split = formats.read_splitting(args.file)
    tw = dehn_twist(split, parse_word(args.element))
    print(f"MAP {tw.map}", file=out)
    print(f"INVERSE {tw.inverse}", file=out)
    v = verify_automorphism(tw.map, split, args.radius, inverse=tw.inverse)
    _print_verdict("AUTOMORPHISM", v, out)
    return v.exit_code


def cmd_genfam(args, out) -> int:
    spec = formats.read_genfam(args.file)
    members = generic_family(spec, args.n, args.maxexp)
    for _, m in members:
        print(f"{m} VERIFIED", file=out)
    print(f"TOTAL {len(members)}", file=out)
    return 0


def cmd_ntq(args, out) -> int:
    tower, witnesses, homs = formats.read_ntq(args.file)
    structure = validate_structure(tower)
    if args.check == "structure" or not structure.is_verified:
        _print_verdict("STRUCTURE", structure, out)
        return structure.exit_code
    if args.check == "nondegenerate":
        v = check_nondegenerate(tower, witnesses, args.radius, homs)
        for i, lv in enumerate(v.extra["levels"]):
            _print_verdict(f"LEVEL {i} [{lv.extra['tier']}]", lv, out)
        _print_verdict("NONDEGENERATE", v, out)
        return v.exit_code
    if args.check == "regular":
        v = check_regular(tower, args.radius)
        _print_verdict("REGULAR", v, out)
        return v.exit_code
    m = compose_to_base(tower, witnesses)
    print(f"COMPOSITE {m}", file=out)
    return 0


def cmd_diagram(args, out) -> int:
    d = formats.read_diagram(args.file)
    if args.eval:
        fs = formats.read_choices(args.eval, d)
        m = evaluate_fundamental_sequence(d, fs)
        print(f"MAP {m}", file=out)
        if d.system is not None:
            print("SOLUTION VERIFIED", file=out)
        return 0
    if args.strict:
        parts = []
        for branch in d.branches():
            for k, v in check_strictness(d, branch, args.radius).items():
                _print_verdict(f"BRANCH {' '.join(branch)} CONDITION {k}", v, out)
                parts.append(v)
        v = combine(parts) if parts else Verdict.verified(args.radius)
        return v.exit_code
    checks = validate_diagram(d, args.radius)
    for k, v in checks.items():
        _print_verdict(k.upper(), v, out)
    return combine(checks.values()).exit_code


def cmd_omega(args, out) -> int:
    print(build_omega_sentence(formats.read_record(args.rec1), formats.read_record(args.rec2)), file=out)
    return 0


def cmd_bass_serre(args, out) -> int:
    split = formats.read_splitting(args.file)
    if not isinstance(split, HNNSplitting):
        raise GroupLabError("bass-serre needs an hnn splitting")
    tree = enumerate_bass_serre(split, args.syllables, args.exp, args.replen)
    print(tree.format(), file=out)
    return 0


def cmd_dist(args, out) -> int:
    (m1, *r1), (m2, *r2) = formats.read_markings(args.m1), formats.read_markings(args.m2)
    if r1 or r2:
        raise GroupLabError("dist takes files with a single marking each")
    d = distance_at_cutoff(m1, m2, args.cutoff)
    print(d, file=out)
    return 0 if d.exact else EXIT_CODES[Status.UNKNOWN]


def cmd_converge(args, out) -> int:
    seq = [m for f in args.files for m in formats.read_markings(f)]
    for row in convergence_table(seq, args.cutoff):
        print(row, file=out)
    return 0


COMMANDS = {
    "solve": cmd_solve,
    "twist": cmd_twist,
    "genfam": cmd_genfam,
    "ntq": cmd_ntq,
    "diagram": cmd_diagram,
    "omega": cmd_omega,
    "bass-serre": cmd_bass_serre,
    "dist": cmd_dist,
    "converge": cmd_converge,
}


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.verb](args, out)
    except UsageError as exc:
        print(f"grouplab: usage error: {exc}", file=err)
    except GroupLabError as exc:
        print(f"grouplab: {type(exc).__name__}: {' '.join(str(exc).split())}", file=err)
    except KeyError as exc:
        print(f"grouplab: unknown name {exc}", file=err)
    return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
