"""Write the ordinates of the zeta zeros in a window using mpmath.zetazero.

    python scripts/make_reference_zeros.py 100 130 tests/data/zeros_100_130.txt
"""

import argparse

import mpmath


def zeros_between(lo: float, hi: float, dps: int = 30) -> list[str]:
    mpmath.mp.dps = dps
    # locate the first index by the Riemann-von Mangoldt count, then walk
    n = max(1, int(mpmath.nzeros(lo)))
    while n > 1 and mpmath.zetazero(n).imag >= lo:
        n -= 1
    out = []
    while True:
        g = mpmath.zetazero(n).imag
        if g > hi:
            return out
        if g >= lo:
            out.append(mpmath.nstr(g, 20))
        n += 1


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("lo", type=float)
    ap.add_argument("hi", type=float)
    ap.add_argument("out")
    args = ap.parse_args()
    zs = zeros_between(args.lo, args.hi)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# zeta zero ordinates in [{args.lo:g}, {args.hi:g}], mpmath.zetazero at 30 digits\n")
        fh.writelines(z + "\n" for z in zs)
    print(f"{len(zs)} zeros -> {args.out}")


if __name__ == "__main__":
    main()
