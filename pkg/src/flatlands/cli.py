"""Command line: check colorings, run verification sweeps, generate documents.

A coloring document is JSON with fields kind ("PG"|"AG"), r (geometry
rank), q (field order), green (strictly increasing point indices under
the canonical lexicographic point ordering).  Exit codes: 0 success /
target, 1 non-target or failed verification, 2 input or budget error.
"""

import argparse
import json
import os
import random
import sys

from .fields import field_make, NotPrimePower, OrderTooLarge
from .geometry import Geometry, PROJECTIVE, AFFINE, TooLarge
from .coloring import Coloring, recognize_target
from .catalog import find_forbidden, UnsupportedOrder
from .harness import verify_theorem, sample_verify, random_target, BudgetExceeded


class DocumentError(ValueError):
    pass


def load_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(f"not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    for key in ("kind", "r", "q", "green"):
        if key not in doc:
            raise DocumentError(f"missing field {key!r}")
    if doc["kind"] not in (PROJECTIVE, AFFINE):
        raise DocumentError(f"kind must be 'PG' or 'AG', got {doc['kind']!r}")
    if not isinstance(doc["r"], int) or not isinstance(doc["q"], int):
        raise DocumentError("r and q must be integers")
    green = doc["green"]
    if not isinstance(green, list) or any(not isinstance(i, int) for i in green):
        raise DocumentError("green must be a list of integers")
    if any(b <= a for a, b in zip(green, green[1:])):
        raise DocumentError("green indices must be strictly increasing")
    return doc


def geometry_from_doc(doc):
    try:
        field = field_make(doc["q"])
        g = Geometry(doc["kind"], doc["r"], field)
    except (NotPrimePower, OrderTooLarge, TooLarge, ValueError) as e:
        raise DocumentError(str(e)) from e
    if doc["green"] and not 0 <= doc["green"][-1] < g.n:
        raise DocumentError(
            f"green index {doc['green'][-1]} out of range for {g!r} ({g.n} points)"
        )
    if doc["green"] and doc["green"][0] < 0:
        raise DocumentError("green indices must be nonnegative")
    return g


def dump_document(g, green):
    return json.dumps(
        {"kind": g.kind, "r": g.r, "q": g.field.q, "green": sorted(green)}
    )


def cmd_check(args):
    text = sys.stdin.read() if args.path in (None, "-") else open(args.path).read()
    try:
        doc = load_document(text)
        g = geometry_from_doc(doc)
    except (DocumentError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    c = Coloring(g, frozenset(doc["green"]))
    decision = recognize_target(c)
    if decision.accepted:
        print("TARGET")
        for f in decision.sequence.flats:
            print(f"  {sorted(f)}")
        return 0
    print("NON-TARGET")
    print(f"  stuck flat: {sorted(decision.stuck_flat.members)}")
    try:
        witness = find_forbidden(c)
    except UnsupportedOrder:
        witness = None
    if witness is not None:
        print(f"  witness: {witness.name} on points {list(witness.points)}")
    return 1


def cmd_verify(args):
    try:
        g = Geometry(args.kind, args.r, field_make(args.q))
    except (NotPrimePower, OrderTooLarge, TooLarge, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    threads = None
    env = os.environ.get("FLATLANDS_THREADS")
    if env:
        threads = max(1, int(env))
    try:
        if args.sample is not None:
            report = sample_verify(g, args.sample, args.seed, threads=threads)
        else:
            report = verify_theorem(g, threads=threads)
    except BudgetExceeded as e:
        print(f"error: {e}; rerun with --sample N --seed S", file=sys.stderr)
        return 2
    print(
        f"{report.descriptor}: {report.total_colorings} colorings "
        f"({report.mode}), accepted={report.accepted}, "
        f"forbidden_free={report.forbidden_free}, "
        f"mismatches={len(report.mismatches)}, {report.elapsed:.1f}s"
    )
    for m in report.mismatches:
        print(f"  mismatch green={list(m)}")
    if args.json:
        print(json.dumps(report.to_dict()))
    return 0 if report.ok else 1


def cmd_gen(args):
    try:
        g = Geometry(args.kind, args.r, field_make(args.q))
    except (NotPrimePower, OrderTooLarge, TooLarge, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rng = random.Random(args.seed)
    if args.random:
        green = [i for i in range(g.n) if rng.random() < 0.5]
    else:
        green = sorted(random_target(g, rng).green)
    print(dump_document(g, green))
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="flatlands",
        description="targets from nested flat sequences in PG/AG geometries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="recognize a coloring document")
    p_check.add_argument("path", nargs="?", help="document path (default stdin)")
    p_check.set_defaults(func=cmd_check)

    p_verify = sub.add_parser("verify", help="sweep a geometry for mismatches")
    p_verify.add_argument("kind", choices=(PROJECTIVE, AFFINE))
    p_verify.add_argument("r", type=int)
    p_verify.add_argument("q", type=int)
    mode = p_verify.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true")
    mode.add_argument("--sample", type=int, metavar="N")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=cmd_verify)

    p_gen = sub.add_parser("gen", help="emit a coloring document")
    p_gen.add_argument("kind", choices=(PROJECTIVE, AFFINE))
    p_gen.add_argument("r", type=int)
    p_gen.add_argument("q", type=int)
    which = p_gen.add_mutually_exclusive_group(required=True)
    which.add_argument("--target", action="store_true")
    which.add_argument("--random", action="store_true")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.set_defaults(func=cmd_gen)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
