#!/usr/bin/env python3
"""Counterexample safari over random ordinal sums.

Draws random ordinal sums (1-3 summands, random inner kinds), runs the
targeted counterexample search on each, and reports the violation gaps.
Every non-trivial ordinal sum must yield a witness; a run that finds none
for some draw would be a bug worth keeping, so the script exits nonzero in
that case and prints the offending construction.

    python scripts/hunt_ordinal_sums.py --draws 50 --seed 7
"""

import argparse
import sys

from tnormlab import GridSpec, Lukasiewicz, OrdinalSum, Product, SchweizerSklar
from tnormlab.analysis import find_gph_counterexample
from tnormlab.core import spec_label
from tnormlab.rng import SplitMix64

INNER_KINDS = [
    lambda u: Lukasiewicz(),
    lambda u: Product(),
    lambda u: SchweizerSklar(0.5 + 3.0 * u),
    lambda u: SchweizerSklar(-2.0 + 1.5 * u),
]


def random_ordinal_sum(rng: SplitMix64) -> OrdinalSum:
    count = 1 + int(rng.next_unit() * 3) % 3
    cuts = sorted(round(0.05 + 0.9 * rng.next_unit(), 3)
                  for _ in range(2 * count))
    summands = []
    for i in range(count):
        lower, upper = cuts[2 * i], cuts[2 * i + 1]
        if upper - lower < 0.05:
            upper = min(1.0, lower + 0.05)
        inner = INNER_KINDS[int(rng.next_unit() * 4) % 4](rng.next_unit())
        summands.append((lower, upper, inner))
    # drop summands that collide after the widening above
    cleaned = []
    last_upper = 0.0
    for lower, upper, inner in summands:
        if lower >= last_upper and lower < upper:
            cleaned.append((lower, upper, inner))
            last_upper = upper
    return OrdinalSum(cleaned or summands[:1])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--draws", type=int, default=25)
    parser.add_argument("--seed", type=lambda s: int(s, 0), default=7)
    parser.add_argument("--points", type=int, default=51)
    parser.add_argument("--samples", type=int, default=2_000)
    args = parser.parse_args(argv)

    rng = SplitMix64(args.seed)
    grid = GridSpec(points=args.points, samples=args.samples, seed=args.seed)
    misses = []
    gaps = []
    for i in range(args.draws):
        spec = random_ordinal_sum(rng)
        report = find_gph_counterexample(spec, grid)
        label = spec_label(spec)
        if report.witness is None:
            misses.append(label)
            print(f"[{i:03d}] NO WITNESS  {label}")
            continue
        w = report.witness
        gaps.append(w.gap)
        print(f"[{i:03d}] gap {w.gap:8.5f} at (l={w.lam:.4g}, x={w.x:.4g},"
              f" y={w.y:.4g}) via {report.metadata['witness_source']:>6}"
              f"  {label}")

    if gaps:
        print(f"\n{len(gaps)} witnesses; gap min {min(gaps):.5f}, "
              f"median {sorted(gaps)[len(gaps) // 2]:.5f}, max {max(gaps):.5f}")
    if misses:
        print(f"{len(misses)} draws produced no witness:", *misses, sep="\n  ")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
