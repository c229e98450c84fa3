"""Mean-value ratios of the additive and multiplicative examples as T grows.

    python scripts/mean_value_trend.py --T 1e4 1e5 1e6 --k 1 2

For each T and k prints the example1 ratio (g1 = g2 = 5, k2 = min(k, 7)),
the example2 ratio (g1 = 2, g2 = 5, k1 = k, k2 = 1) and the error scale
k^2 / ln T.  The relation is asymptotic, so |ratio - 1| should shrink with T
while the scale stays below 1.
"""

import argparse
import csv
import sys

from ladderlab import energy
from ladderlab.harness import RunConfig, TableProvider


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, nargs="+", default=[1e4, 1e5])
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2])
    ap.add_argument("--g1", type=float, default=5.0)
    ap.add_argument("--g2", type=float, default=5.0)
    args = ap.parse_args()

    cfg = RunConfig(k0=max(10, *args.k))
    provider = TableProvider(cfg)
    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["T", "k", "example1_ratio", "example2_ratio", "error_scale", "non_convergent"])
    for T in args.T:
        for k in args.k:
            need = [(args.g1 + args.g2, k), (args.g1 * args.g2, 1)]
            table = provider.for_requirements(T, need)
            e1 = energy.example1_ratio(table, T, args.g1, args.g2, k, limits=cfg.limits)
            e2 = energy.example2_ratio(table, T, 2.0, args.g2, k1=k, k2=1, limits=cfg.limits)
            out.writerow([T, k, repr(e1.extras["ratio"]), repr(e2.extras["ratio"]),
                          repr(e1.extras["error_scale"]), e1.extras["non_convergent"]])
            sys.stdout.flush()


if __name__ == "__main__":
    main()
