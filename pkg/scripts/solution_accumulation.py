#!/usr/bin/env python3
"""Show solutions piling up near a boundary singularity as truncations grow.

Every finite truncation of the zero sequence is analytic across the anchor,
so Theta_N = 1 has finitely many solutions in a fixed one-sided window
(anchor, anchor + eps).  The count climbing without bound as N doubles is
the computable fingerprint of a genuine accumulation point: in the limit
the function hits every unimodular value infinitely often on the window
side that carries the zeros.
"""

import argparse
import math
import sys

from innerinv import InnerFunctionSpec, StolzTail, TangentialTail
from innerinv.classify import truncated_solution_count


def build_spec(kind: str) -> InnerFunctionSpec:
    if kind == "stolz":
        return InnerFunctionSpec(tails=(StolzTail(0.0, 0.5, 0.5),))
    return InnerFunctionSpec(tails=(TangentialTail(0.0, "upper", 4.0),))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--kind",
        choices=["stolz", "tangential"],
        default="stolz",
        help="which zero sequence accumulates at the anchor",
    )
    parser.add_argument(
        "--eps",
        type=float,
        nargs="+",
        default=[0.5, 0.1, 0.02],
        help="one-sided window widths above the anchor",
    )
    parser.add_argument("--max-terms", type=int, default=4096)
    args = parser.parse_args()

    spec = build_spec(args.kind)
    anchor = 0.0
    widths = sorted(args.eps, reverse=True)

    header = "terms" + "".join(f"  count(eps={e:g})" for e in widths)
    print(f"solutions of Theta_N = 1 in (0, eps), {args.kind} tail at angle 0")
    print(header)
    print("-" * len(header))
    n = 8
    while n <= args.max_terms:
        counts = [truncated_solution_count(spec, anchor, e, n) for e in widths]
        print(f"{n:5d}" + "".join(f"  {c:14d}" for c in counts))
        n *= 2

    # sanity: the count never levels off between the two largest truncations
    last = truncated_solution_count(spec, anchor, widths[0], args.max_terms)
    prev = truncated_solution_count(spec, anchor, widths[0], args.max_terms // 2)
    if last <= prev:
        print("warning: counts stopped growing; widen eps or raise --max-terms")
        return 1
    print(f"\ncounts keep growing ({prev} -> {last}); the window traps every "
          "truncation level")
    return 0


if __name__ == "__main__":
    sys.exit(main())
