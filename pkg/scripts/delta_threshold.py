"""Find the smallest a from which the rational bracket on rho3 - (a+1) holds.

The bracket is checked by exact sign evaluation of f_a at two rational points.
"""

import argparse

from cubiclattice.cli import parse_range
from cubiclattice.closedform import delta_bounds_check
from cubiclattice.cubicfield import CubicParams


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--a", default="1..5000", help="a range LO..HI")
    args = parser.parse_args(argv)
    lo, hi = parse_range(args.a)

    failing = [a for a in range(lo, hi + 1) if not delta_bounds_check(CubicParams(a)).passed]
    print(f"checked a={lo}..{hi}")
    print(f"failing: {failing if failing else 'none'}")
    if failing and failing[-1] < hi:
        print(f"passes for every a >= {failing[-1] + 1} in range")
    elif not failing:
        print("passes for every a in range")


if __name__ == "__main__":
    main()
