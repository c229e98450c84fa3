"""Gaps between the components [T^r, (T+g)^r] of the reversed ladder, against T / ln T.

    python scripts/gap_diagnostics.py --T 1e4 1e5 1e6 --g 5 --k 2

Prints CSV: T, r, gap, gap * ln T / T.  Tables come from the run cache.
"""

import argparse
import csv
import math
import sys

from ladderlab.harness import RunConfig, TableProvider
from ladderlab.ladder import component_set


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, nargs="+", default=[1e4, 1e5])
    ap.add_argument("--g", type=float, default=5.0)
    ap.add_argument("--k", type=int, default=2)
    args = ap.parse_args()

    provider = TableProvider(RunConfig())
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["T", "r", "gap", "gap_lnT_over_T"])
    for T in args.T:
        table = provider.for_requirements(T, [(args.g, args.k)])
        cs = component_set(table, T, args.g, args.k)
        for r, gap in enumerate(cs.gaps, start=1):
            out.writerow([T, r, repr(gap), repr(gap * math.log(T) / T)])


if __name__ == "__main__":
    main()
