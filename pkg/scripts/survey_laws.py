#!/usr/bin/env python3
"""Survey transition laws and semantic predicates over random terms.

Builds the reachable graph of each generated term, re-checks the
structural laws, and tallies how often the root satisfies each
predicate.  A non-empty law report makes the run exit non-zero.
"""

import argparse
import random
import sys

from tccs import build_lts, facts, verify_lts_laws
from tccs.generate import GenConfig, random_term


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--max-defs", type=int, default=4)
    ap.add_argument("--bound", type=int, default=4000)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cfg = GenConfig(depth=args.depth, max_defs=args.max_defs)
    tally = {
        "stable": 0, "converge": 0, "ctxconv": 0,
        "diverge": 0, "reactive": 0, "barbed": 0,
    }
    states = 0
    truncated = 0
    violations: list[str] = []

    for _ in range(args.count):
        p, defs = random_term(rng, cfg)
        lts = build_lts([p], defs, bound=args.bound)
        if lts.truncated:
            truncated += 1
            continue
        violations.extend(verify_lts_laws(lts))
        states += len(lts)
        f = facts(lts, lts.roots[0])
        tally["stable"] += f.stable
        tally["converge"] += f.may_converge
        tally["ctxconv"] += f.ctx_converge
        tally["diverge"] += f.may_diverge
        tally["reactive"] += f.reactive_root
        tally["barbed"] += bool(f.barbs)

    done = args.count - truncated
    print("terms: %d  (skipped %d at bound %d)" % (done, truncated, args.bound))
    if done:
        print("mean states per graph: %.1f" % (states / done))
        for key, hits in tally.items():
            print("  %-9s %5d  (%.1f%%)" % (key, hits, 100.0 * hits / done))
    if violations:
        print("law violations:")
        for v in violations:
            print("  " + v)
        return 1
    print("law violations: none")
    return 0


if __name__ == "__main__":
    sys.exit(main())
