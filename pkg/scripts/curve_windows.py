"""theta_hat over consecutive windows [T + jH, T + (j+1)H].

    python scripts/curve_windows.py --T 1e5 --H 200 --windows 5

Prints CSV: window start, zeros, critical points, arc length, extrema sum,
theta_hat, interlacing exceptions.
"""

import argparse
import csv
import sys

from ladderlab.curve import curve_length_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--T", type=float, default=1e5)
    ap.add_argument("--H", type=float, default=200.0)
    ap.add_argument("--windows", type=int, default=3)
    args = ap.parse_args()

    out = csv.writer(sys.stdout, lineterminator="\n")
    out.writerow(["start", "zeros", "critical_points", "arc_length", "extrema_sum", "theta_hat",
                  "interlacing_exceptions"])
    for j in range(args.windows):
        start = args.T + j * args.H
        rep = curve_length_check(start, args.H)
        out.writerow([start, rep.zero_count, rep.critical_points, repr(rep.arc_length),
                      repr(rep.extrema_sum), repr(rep.theta_hat), rep.interlacing_exceptions])
        sys.stdout.flush()


if __name__ == "__main__":
    main()
