"""Radial profiles of the two imaging kernels, |J0(k0 r)| and J0(k0 r)^2, as CSV.

The first sidelobe of J0^2 is the square of the |J0| sidelobe, which is why
the phase-compensated indicator shows weaker ripples.

    python scripts/sidelobes.py [--points 400] [--max-arg 20] > kernels.csv
"""

import argparse
import sys

import numpy as np

from dsmimaging import bessel_j0
from dsmimaging.imaging import kernel_first_sidelobe


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--points", type=int, default=400)
    ap.add_argument("--max-arg", type=float, default=20.0, help="largest k0*r")
    args = ap.parse_args()

    side = kernel_first_sidelobe()
    print(
        f"# first sidelobe at k0 r = {side['argument']:.6f}: |J0| {side['abs_j0']:.6f}, J0^2 {side['j0_squared']:.6f}",
        file=sys.stderr,
    )
    x = np.linspace(0, args.max_arg, args.points)
    j = bessel_j0(x)
    print("k0r,abs_j0,j0_squared")
    for xi, ji in zip(x, j):
        print(f"{xi:.6f},{abs(ji):.8f},{ji * ji:.8f}")


if __name__ == "__main__":
    main()
