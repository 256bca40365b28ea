#!/usr/bin/env python3
"""Exhaustively compare the two compatibility deciders on one geometry.

For a projective geometry and its first canonical hyperplane H, every
pair of (deletion-side target, hyperplane-side target) is checked with
both the direct merge test and the sequence-conditions test; any
disagreement is printed. Usage: compatibility_sweep.py [r] [q]
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from flatlands import (  # noqa: E402
    PROJECTIVE,
    Geometry,
    field_make,
    enumerate_compatibility_instances,
    check_compatibility_direct,
    check_compatibility_conditions,
)


def main():
    r = int(sys.argv[1]) if len(sys.argv) > 1 else 4
    q = int(sys.argv[2]) if len(sys.argv) > 2 else 2
    g = Geometry(PROJECTIVE, r, field_make(q))
    h = g.make_flat(g.hyperplane_masks()[0])
    t0 = time.time()
    pairs = compatible = bad = 0
    for inst in enumerate_compatibility_instances(g, h):
        direct = check_compatibility_direct(inst)
        cond = check_compatibility_conditions(inst)
        pairs += 1
        compatible += direct
        if direct != cond:
            bad += 1
            print(
                f"DISAGREE affine={sorted(inst.affine_green)} "
                f"hyperplane={sorted(inst.hyperplane_green)} "
                f"direct={direct} conditions={cond}"
            )
    print(
        f"{g!r}: {pairs} pairs, {compatible} compatible, "
        f"{bad} disagreements, {time.time() - t0:.1f}s"
    )
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
