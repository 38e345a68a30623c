"""Record how far floor(k*rho3) reaches past k(a+1) for k <= a.

Prints a CSV of (a, k, xmax, offset) where offset = xmax - k(a+1), followed by
a summary line counting how often each offset occurs.
"""

import argparse
import csv
import sys
from collections import Counter

from cubiclattice.cli import parse_range
from cubiclattice.cubicfield import CubicParams
from cubiclattice.triangle import x_range


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a", default="1..200", help="a range LO..HI")
    parser.add_argument("--rows", action="store_true", help="emit one row per (a, k)")
    args = parser.parse_args(argv)
    lo, hi = parse_range(args.a)

    tally = Counter()
    writer = csv.writer(sys.stdout, lineterminator="\n")
    if args.rows:
        writer.writerow(["a", "k", "xmax", "offset"])
    for a in range(lo, hi + 1):
        p = CubicParams(a)
        for k in range(1, a + 1):
            xmax = x_range(p, k)[1]
            offset = xmax - k * (a + 1)
            tally[offset] += 1
            if args.rows:
                writer.writerow([a, k, xmax, offset])
    summary = " ".join(f"offset{off}={tally[off]}" for off in sorted(tally))
    print(f"# a={lo}..{hi} {summary}", file=sys.stderr)


if __name__ == "__main__":
    main()
