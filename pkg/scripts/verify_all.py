#!/usr/bin/env python3
"""Run every theorem verification sweep and print one report line each.

Exhaustive where the coloring space fits the budget, sampled otherwise.
Exits nonzero if any sweep reports a mismatch between the recognizer
and the forbidden-restriction scan.
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from flatlands import (  # noqa: E402
    PROJECTIVE,
    AFFINE,
    Geometry,
    field_make,
    verify_theorem,
    sample_verify,
)

SWEEPS = [
    (PROJECTIVE, 3, 2, None),
    (PROJECTIVE, 4, 2, None),
    (PROJECTIVE, 3, 3, None),
    (PROJECTIVE, 3, 4, None),
    (AFFINE, 3, 2, None),
    (AFFINE, 4, 2, None),
    (AFFINE, 5, 2, None),
    (AFFINE, 3, 3, None),
    (AFFINE, 4, 3, 100_000),
    (AFFINE, 3, 4, None),
    (AFFINE, 3, 5, None),
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0, help="seed for sampled sweeps")
    parser.add_argument("--threads", type=int, default=os.cpu_count())
    args = parser.parse_args()

    failed = False
    for kind, r, q, sample in SWEEPS:
        g = Geometry(kind, r, field_make(q))
        if sample is None:
            rep = verify_theorem(g, threads=args.threads)
        else:
            rep = sample_verify(g, sample, args.seed, threads=args.threads)
        status = "ok" if rep.ok else "MISMATCH"
        print(
            f"{rep.descriptor:>10} {rep.mode:>26} accepted={rep.accepted:>6} "
            f"forbidden_free={rep.forbidden_free:>6} "
            f"mismatches={len(rep.mismatches)} {rep.elapsed:6.1f}s  {status}"
        )
        failed |= not rep.ok
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
